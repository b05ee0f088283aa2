import math
from fractions import Fraction

import numpy as np
import pytest

from triweight.moments import (QuadratureRule, TriangleWeightParams,
                               dirichlet_moment, dirichlet_moment_exact,
                               gauss_jacobi, integrate_poly, mass,
                               mass_exact, moment_ratio, triangle_rule)
from triweight.poly import Poly2, X1, X2

from conftest import random_params_triple, random_poly


def gamma_formula(m, n, params):
    """Independent oracle: moment straight from the log-Gamma expression."""
    a, b, g = (float(v) for v in params.astuple())
    return math.exp(math.lgamma(a + m + 1) + math.lgamma(b + n + 1)
                    + math.lgamma(g + 1)
                    - math.lgamma(a + b + g + m + n + 3))


def duffy_legendre_oracle(f, params, order=60):
    """Independent quadrature oracle built on numpy's Gauss-Legendre nodes.

    Integrates f(x1, x2) * rho over the triangle through the square map
    x1 = u, x2 = (1 - u) v with the weight evaluated pointwise; accurate
    for nonnegative exponents.
    """
    t, w = np.polynomial.legendre.leggauss(order)
    u = 0.5 * (t + 1.0)
    a, b, g = (float(v) for v in params.astuple())
    total = 0.0
    for ui, wi in zip(u, w):
        for vj, wj in zip(u, w):
            x1 = ui
            x2 = (1.0 - ui) * vj
            rho = x1 ** a * x2 ** b * max(1.0 - x1 - x2, 0.0) ** g
            total += 0.25 * wi * wj * (1.0 - ui) * f(x1, x2) * rho
    return total


def test_mass_unit_triangle():
    assert mass_exact(TriangleWeightParams(0, 0, 0)) == Fraction(1, 2)
    assert mass(TriangleWeightParams(0, 0, 0)) == 0.5


def test_mass_matches_gamma_formula():
    params = TriangleWeightParams("1/2", "-1/3", "7/4")
    assert abs(mass(params) - gamma_formula(0, 0, params)) < 1e-15


def test_second_moment_brute_force():
    # exact value 1/12 frozen from the 1D reduction
    # int_0^1 x^2 (1 - x) dx = 1/3 - 1/4, cross-checked by quadrature
    params = TriangleWeightParams(0, 0, 0)
    assert dirichlet_moment_exact(2, 0, params) == Fraction(1, 12)
    oracle = duffy_legendre_oracle(lambda x, y: x * x, params)
    assert abs(oracle - 1.0 / 12.0) < 1e-14


def test_recurrence_against_gamma_formula(rng):
    for _ in range(10):
        params = TriangleWeightParams(*random_params_triple(rng))
        for m, n in [(0, 0), (1, 0), (0, 1), (5, 3), (12, 4), (20, 20)]:
            got = dirichlet_moment(m, n, params)
            ref = gamma_formula(m, n, params)
            assert abs(got - ref) <= 1e-12 * abs(ref), (params, m, n)


def test_moments_strictly_decreasing():
    params = TriangleWeightParams("1/2", 2, "3/4")
    for m in range(6):
        for n in range(6):
            here = moment_ratio(m, n, params)
            assert moment_ratio(m + 1, n, params) < here
            assert moment_ratio(m, n + 1, params) < here


def test_integrate_poly_examples():
    params = TriangleWeightParams(0, 0, 0)
    assert integrate_poly(Poly2.constant(1), params) == Fraction(1, 2)
    assert integrate_poly(2 + X1 ** 2 + X2 ** 2, params) == Fraction(7, 6)
    assert integrate_poly(Poly2.zero(), params) == 0


def test_integrate_poly_float_fallback():
    params = TriangleWeightParams("1/2", 0, 0)
    value = integrate_poly(Poly2.constant(1), params)
    assert isinstance(value, float)
    assert abs(value - gamma_formula(0, 0, params)) < 1e-15


def test_integrate_poly_against_independent_quadrature(rng):
    params = TriangleWeightParams(1, 2, 1)
    p = random_poly(rng, 4)
    exact = float(integrate_poly(p, params))
    oracle = duffy_legendre_oracle(lambda x, y: float(p(x, y)), params)
    assert abs(exact - oracle) < 1e-13 * max(1.0, abs(exact))


def test_params_validation():
    with pytest.raises(ValueError):
        TriangleWeightParams(-1, 0, 0)
    with pytest.raises(ValueError):
        TriangleWeightParams(0, "-5/4", 0)
    with pytest.raises(ValueError):
        mass_exact(TriangleWeightParams("1/2", 0, 0))


def test_gauss_jacobi_midpoint():
    nodes, weights = gauss_jacobi(1, 0, 0)
    assert np.allclose(nodes, [0.5]) and np.allclose(weights, [1.0])


def test_gauss_jacobi_single_node_general():
    a, b = 1.25, -0.5
    nodes, weights = gauss_jacobi(1, a, b)
    assert abs(nodes[0] - (a + 1) / (a + b + 2)) < 1e-14
    expected_mass = math.exp(math.lgamma(a + 1) + math.lgamma(b + 1)
                             - math.lgamma(a + b + 2))
    assert abs(weights[0] - expected_mass) < 1e-14


def test_gauss_jacobi_two_point_legendre():
    nodes, weights = gauss_jacobi(2, 0, 0)
    expected = sorted([(3 - math.sqrt(3)) / 6, (3 + math.sqrt(3)) / 6])
    assert np.allclose(sorted(nodes), expected)
    assert np.allclose(weights, [0.5, 0.5])


def _jacobi_moments_1d(a, b, count):
    # mu_k = B(a+k+1, b+1) by the ratio recurrence
    mu = [math.exp(math.lgamma(a + 1) + math.lgamma(b + 1)
                   - math.lgamma(a + b + 2))]
    for k in range(count - 1):
        mu.append(mu[-1] * (a + k + 1) / (a + b + k + 2))
    return mu


@pytest.mark.parametrize("a,b", [(0, 0), (0.5, -0.5), (2.0, 3.0),
                                 (-0.9, 4.5)])
def test_gauss_jacobi_polynomial_exactness(a, b):
    n = 6
    nodes, weights = gauss_jacobi(n, a, b)
    mu = _jacobi_moments_1d(a, b, 2 * n)
    for k in range(2 * n):
        got = float(weights @ nodes ** k)
        assert abs(got - mu[k]) <= 1e-13 * abs(mu[k]), k


def test_gauss_jacobi_domain_errors():
    with pytest.raises(ValueError):
        gauss_jacobi(0, 0, 0)
    with pytest.raises(ValueError):
        gauss_jacobi(3, -1, 0)
    with pytest.raises(ValueError):
        gauss_jacobi(3, 0, -1.5)


def test_triangle_rule_single_node():
    rule = triangle_rule(1, TriangleWeightParams(0, 0, 0))
    assert np.allclose(rule.nodes, [[1 / 3, 1 / 3]])
    assert np.allclose(rule.weights, [0.5])
    assert rule.exactness_degree == 0
    assert abs(rule.integrate(X1) - 1 / 6) < 1e-15


def test_triangle_rule_reproduces_mass():
    for triple in [(0, 0, 0), ("1/2", "-1/2", "3/2"), (2, 3, 1)]:
        params = TriangleWeightParams(*triple)
        rule = triangle_rule(4, params)
        assert abs(rule.integrate(Poly2.constant(1)) - mass(params)) \
            <= 1e-14 * mass(params)


def test_triangle_rule_nodes_interior_weights_positive():
    params = TriangleWeightParams("1/2", "-1/2", "3/2")
    rule = triangle_rule(9, params)
    assert (rule.weights > 0).all()
    assert (rule.nodes > 0).all()
    assert (rule.nodes.sum(axis=1) < 1).all()


def test_triangle_rule_matches_moments_to_declared_exactness():
    for triple in [(0, 0, 0), ("1/2", "-1/2", "3/2"), (2, 3, 1)]:
        params = TriangleWeightParams(*triple)
        rule = triangle_rule(8, params)
        for m in range(rule.exactness_degree + 1):
            for n in range(rule.exactness_degree + 1 - m):
                got = rule.integrate(Poly2({(m, n): 1}))
                ref = dirichlet_moment(m, n, params)
                assert abs(got - ref) <= 1e-13 * abs(ref), (triple, m, n)


def test_quadrature_agrees_with_moment_summation(rng):
    params = TriangleWeightParams("1/3", "2/3", 1)
    n = 6
    rule = triangle_rule(n, params)
    for _ in range(10):
        p = random_poly(rng, 2 * n - 2)
        got = rule.integrate(p)
        ref = float(integrate_poly(p, params))
        assert abs(got - ref) <= 1e-12 * max(1.0, abs(ref))


def test_quadrature_rule_integrates_callables():
    params = TriangleWeightParams(0, 0, 0)
    rule = triangle_rule(20, params)
    got = rule.integrate(lambda x, y: math.sin(x + y))
    oracle = duffy_legendre_oracle(lambda x, y: math.sin(x + y), params)
    assert abs(got - oracle) < 1e-12
