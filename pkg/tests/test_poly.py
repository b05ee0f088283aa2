import random
from fractions import Fraction

import pytest

from triweight.poly import (MatPoly2, NotDivisibleError, Poly2, X1, X2,
                            format_poly, linear_form, parse_poly)

from conftest import random_poly


def test_monomial_product():
    assert X1 * X2 == Poly2({(1, 1): 1})


def test_binomial_square():
    hyp = 1 - X1 - X2
    expected = Poly2({(0, 0): 1, (1, 0): -2, (0, 1): -2,
                      (2, 0): 1, (1, 1): 2, (0, 2): 1})
    assert hyp * hyp == expected


def test_product_against_evaluation():
    # hand expansion, cross-checked by evaluating both sides at 5 points
    left = X1 * (1 - X1)
    right = 1 - 3 * X1
    product = left * right
    assert product == Poly2({(1, 0): 1, (2, 0): -4, (3, 0): 3})
    rng = random.Random(11)
    for _ in range(5):
        x = Fraction(rng.randint(-20, 20), 7)
        y = Fraction(rng.randint(-20, 20), 7)
        assert product(x, y) == left(x, y) * right(x, y)


def test_diff_examples():
    assert (X1 * (1 - X1)).diff(1) == 1 - 2 * X1
    assert (-X1 * X2).diff(2) == -X1
    assert Poly2.constant(5).diff(1).is_zero


def test_degree_and_zero_conventions():
    assert Poly2.zero().is_zero
    assert Poly2.zero().degree == -1
    assert (Poly2.zero() * X1).is_zero
    assert Poly2.zero().diff(1).is_zero
    assert Poly2.zero()(3, 4) == 0
    assert (X1 - X1).is_zero
    assert Poly2({(2, 1): 0}).is_zero


def test_eval_examples():
    assert (X1 + X2)(0.25, 0.25) == 0.5
    p = X1 * (1 - X1)
    assert p(Fraction(1, 3), Fraction(1, 3)) == Fraction(2, 9)


def test_divexact_examples():
    assert (X1 * X2).divexact(X1) == X2
    p = X1 * (1 - X1) - X1 * X2
    assert p.divexact(1 - X1 - X2) == X1
    with pytest.raises(NotDivisibleError):
        (1 + X1).divexact(X1)


def test_divexact_roundtrip(rng):
    divisors = [X1, X2, 1 - X1 - X2]
    for _ in range(40):
        q = random_poly(rng, rng.randint(0, 5))
        d = rng.choice(divisors)
        assert (q * d).divexact(d) == q


def test_leibniz_rule(rng):
    for _ in range(25):
        p = random_poly(rng, rng.randint(0, 6))
        q = random_poly(rng, rng.randint(0, 6))
        for axis in (1, 2):
            assert (p * q).diff(axis) == \
                p.diff(axis) * q + p * q.diff(axis)


def test_evaluation_is_ring_homomorphism(rng):
    p = random_poly(rng, 4)
    q = random_poly(rng, 3)
    for _ in range(10):
        x = Fraction(rng.randint(-9, 9), 4)
        y = Fraction(rng.randint(-9, 9), 4)
        assert (p * q)(x, y) == p(x, y) * q(x, y)
        assert (p + q)(x, y) == p(x, y) + q(x, y)


def test_grlex_term_order():
    p = Poly2({(0, 2): 1, (2, 0): 1, (1, 1): 1, (0, 0): 1, (1, 0): 1})
    assert [e for e, _ in p.terms()] == \
        [(0, 0), (1, 0), (2, 0), (1, 1), (0, 2)]


def test_pow():
    assert (1 + X1) ** 3 == Poly2(
        {(0, 0): 1, (1, 0): 3, (2, 0): 3, (3, 0): 1})
    assert (X1 + X2) ** 0 == Poly2.constant(1)


def test_parse_format_roundtrip(rng):
    for _ in range(30):
        p = random_poly(rng, rng.randint(0, 5))
        assert parse_poly(format_poly(p)) == p
    assert parse_poly("0") == Poly2.zero()
    assert parse_poly("7/3*x1^2*x2 - x2 + 1") == \
        Poly2({(2, 1): Fraction(7, 3), (0, 1): -1, (0, 0): 1})
    assert parse_poly("0.5*x1") == Poly2({(1, 0): Fraction(1, 2)})
    assert parse_poly("-x1*x2^2") == Poly2({(1, 2): -1})


def test_parse_rejects_garbage():
    for bad in ("", "x3", "1++2", "x1^", "2**x1"):
        with pytest.raises((ValueError, TypeError)):
            parse_poly(bad)


def test_linear_form():
    assert linear_form(1, -1, -1) == 1 - X1 - X2


def test_matpoly_symmetric_access():
    m = MatPoly2(X1, X1 * X2, X2)
    assert m.entry(1, 2) == m.entry(2, 1) == X1 * X2
    assert m.max_degree == 2
    with pytest.raises(ValueError):
        MatPoly2.from_rows([[X1, X1], [X2, X2]])


def test_matpoly_matvec():
    m = MatPoly2(X1 * (1 - X1), -X1 * X2, X2 * (1 - X2))
    v1, v2 = m.matvec((-1, 0))
    assert v1 == -X1 * (1 - X1)
    assert v2 == X1 * X2


def test_float_coefficients_propagate():
    p = Poly2({(1, 0): 0.5}) * Poly2({(0, 1): 4})
    assert p.coefficient(1, 1) == 2.0
    assert p.has_float_coefficients
    assert not (X1 * X2).has_float_coefficients
