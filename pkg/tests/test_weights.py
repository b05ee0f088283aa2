import random
from fractions import Fraction

import pytest

from triweight.moments import TriangleWeightParams, integrate_poly
from triweight.poly import MatPoly2, Poly2, X1, X2
from triweight.weights import (Edge, DomainEdges, WeightCheckError,
                               WeightSpec, boundary_check,
                               differential_system_check, divergence_factor,
                               identity_matrix, pearson_check,
                               triangle_edges, triangle_matrix, verify_weight)

from conftest import random_params_triple, random_poly


def expected_triangle_psi(alpha, beta, gamma):
    s = Fraction(alpha) + Fraction(beta) + Fraction(gamma) + 3
    return (Poly2({(0, 0): Fraction(alpha) + 1, (1, 0): -s}),
            Poly2({(0, 0): Fraction(beta) + 1, (0, 1): -s}))


def test_pearson_triangle_plain():
    data = pearson_check(triangle_matrix(), WeightSpec.triangle(0, 0, 0))
    assert data.psi1 == 1 - 3 * X1
    assert data.psi2 == 1 - 3 * X2
    assert data.det == 9


def test_pearson_triangle_random_rational(rng):
    phi = triangle_matrix()
    for _ in range(20):
        alpha, beta, gamma = random_params_triple(rng)
        data = pearson_check(phi, WeightSpec.triangle(alpha, beta, gamma))
        psi1, psi2 = expected_triangle_psi(alpha, beta, gamma)
        assert data.psi1 == psi1 and data.psi2 == psi2
        assert data.det == (alpha + beta + gamma + 3) ** 2


def test_pearson_residual_identity(rng):
    # D*psi_j equals the assembled numerator P_j exactly
    phi = triangle_matrix()
    for _ in range(20):
        weight = WeightSpec.triangle(*random_params_triple(rng))
        den = weight.denominator()
        g1, g2 = weight.log_gradient_numerators()
        data = pearson_check(phi, weight)
        for j, psi in ((1, data.psi1), (2, data.psi2)):
            p_j = den * (phi.entry(1, j).diff(1) + phi.entry(2, j).diff(2)) \
                + g1 * phi.entry(1, j) + g2 * phi.entry(2, j)
            assert (den * psi - p_j).is_zero


def test_pearson_identity_matrix_not_divisible():
    with pytest.raises(WeightCheckError) as err:
        pearson_check(identity_matrix(), WeightSpec.triangle(1, 0, 0))
    assert err.value.stage == "not_divisible"


def test_pearson_degenerate_directions():
    # constant weight with the identity matrix gives psi = (0, 0)
    weight = WeightSpec(((X1, 0),))
    with pytest.raises(WeightCheckError) as err:
        pearson_check(identity_matrix(), weight)
    assert err.value.stage == "degenerate_directions"


def test_pearson_psi_not_affine():
    cubic = MatPoly2(X1 ** 3, Poly2.zero(), X1 ** 3)
    with pytest.raises(WeightCheckError) as err:
        pearson_check(cubic, WeightSpec(((X1, 1),)))
    assert err.value.stage == "psi_not_affine"


def test_pearson_deterministic():
    phi = triangle_matrix()
    weight = WeightSpec.triangle("1/2", "-1/3", "5/4")
    assert pearson_check(phi, weight) == pearson_check(phi, weight)


def test_weightspec_validation():
    with pytest.raises(ValueError):
        WeightSpec.triangle(-1, 0, 0)
    with pytest.raises(ValueError):
        WeightSpec(((X1, Fraction(-3, 2)),))
    with pytest.raises(ValueError):
        WeightSpec(((X1 * X2, 1),))  # degree 2 factor
    with pytest.raises(ValueError):
        WeightSpec(((Poly2.zero(), 1),))


def test_boundary_triangle_passes():
    result = boundary_check(triangle_matrix(), triangle_edges())
    assert result.passed
    assert all(c.passed for c in result.checks)


def test_boundary_component_factorizations():
    phi = triangle_matrix()
    # edge x1 = 0 with direction (-1, 0): flux (-x1(1-x1), x1x2)
    v1, v2 = phi.matvec((-1, 0))
    assert v1.divexact(X1) == -(1 - X1)
    assert v2.divexact(X1) == X2
    # hypotenuse with direction (1, 1): flux proportional to
    # (x1(1-x1-x2), x2(1-x1-x2))
    w1, w2 = phi.matvec((1, 1))
    hyp = 1 - X1 - X2
    assert w1.divexact(hyp) == X1
    assert w2.divexact(hyp) == X2


def test_boundary_identity_fails_first_edge():
    result = boundary_check(identity_matrix(), triangle_edges())
    assert not result.passed
    assert result.first_failure.index == 0
    assert result.first_failure.failing_component == 1


def test_boundary_scale_invariance():
    phi = triangle_matrix()
    scaled = DomainEdges(tuple(
        Edge(e.form, (Fraction(7, 2) * e.direction[0],
                      Fraction(7, 2) * e.direction[1]))
        for e in triangle_edges().edges))
    assert boundary_check(phi, scaled).passed == \
        boundary_check(phi, triangle_edges()).passed


def test_edge_unit_normal():
    hyp = triangle_edges().edges[2]
    n1, n2 = hyp.unit_normal
    assert abs(n1 - 2 ** -0.5) < 1e-15 and abs(n2 - 2 ** -0.5) < 1e-15


def test_differential_system_identity_passes_both():
    for orientation in ("A", "B"):
        assert differential_system_check(identity_matrix(),
                                         orientation).passed


def test_differential_system_triangle_fixture():
    # recorded outcome: the triangle matrix satisfies the system with the
    # rows-as-derivative-axis layout and not with the transpose
    assert differential_system_check(triangle_matrix(), "A").passed
    result_b = differential_system_check(triangle_matrix(), "B")
    assert not result_b.passed
    assert any(not entry.is_zero
               for res in result_b.residuals for row in res for entry in row)


def test_differential_system_diagonal_fixture():
    diag = MatPoly2(X1, Poly2.zero(), X2)
    assert differential_system_check(diag, "A").passed
    assert differential_system_check(diag, "B").passed


def test_divergence_factor_examples():
    phi = triangle_matrix()
    data = pearson_check(phi, WeightSpec.triangle(0, 0, 0))
    zero = Poly2.zero()
    assert divergence_factor(zero, zero, phi, data).is_zero
    assert divergence_factor(Poly2.constant(1), zero, phi, data) == 1 - 3 * X1
    assert divergence_factor(X1, zero, phi, data) == \
        Poly2({(1, 0): 2, (2, 0): -4})


@pytest.mark.parametrize("exponent", [0, 1])
def test_green_identity_exact(rng, exponent):
    # integral of u*K*rho plus (grad u)^T Phi v rho vanishes identically
    phi = triangle_matrix()
    params = TriangleWeightParams(exponent, exponent, exponent)
    data = pearson_check(
        phi, WeightSpec.triangle(exponent, exponent, exponent))
    for _ in range(10):
        u = random_poly(rng, 4)
        v1 = random_poly(rng, 3)
        v2 = random_poly(rng, 3)
        k = divergence_factor(v1, v2, phi, data)
        du1, du2 = u.diff(1), u.diff(2)
        w1, w2 = phi.matvec((du1, du2))
        total = integrate_poly(u * k + w1 * v1 + w2 * v2, params)
        assert total == 0


def test_verify_weight_report():
    report = verify_weight(triangle_matrix(), WeightSpec.triangle(2, 1, 3),
                           triangle_edges())
    assert report.classical
    assert report.pearson_ok and report.boundary.passed
    assert report.system_a.passed and not report.system_b.passed
    bad = verify_weight(identity_matrix(), WeightSpec.triangle(0, 0, 0),
                        triangle_edges())
    assert not bad.classical
    assert bad.pearson_stage == "degenerate_directions"
