"""Structure checks for factored bivariate weights.

A weight here is a product of powers of degree-one forms,
rho = prod q_i ** g_i.  For such weights the logarithmic gradient is
rational with denominator prod q_i, so the Pearson divergence identity,
the edgewise Neumann-type vanishing condition and the auxiliary matrix
differential system can all be decided as exact polynomial identities
(divisibility and equality), with no tolerances involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .poly import MatPoly2, NotDivisibleError, Poly2, X1, X2, format_poly


def _exact(value):
    """Exact rational coercion; floats convert to their exact binary value."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    num = getattr(value, "numerator", None)
    if num is not None:
        return Fraction(int(num), int(value.denominator))
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


class WeightCheckError(ValueError):
    """A structure check failed; ``stage`` names the failing requirement."""

    def __init__(self, stage, message):
        super().__init__(message)
        self.stage = stage


@dataclass(frozen=True)
class WeightFactor:
    form: Poly2
    exponent: Fraction


@dataclass(frozen=True)
class WeightSpec:
    """Factored weight prod(form_i ** exponent_i) on a planar domain."""

    factors: tuple

    def __post_init__(self):
        factors = tuple(
            f if isinstance(f, WeightFactor)
            else WeightFactor(f[0], _exact(f[1]))
            for f in self.factors)
        object.__setattr__(self, "factors", factors)
        for f in factors:
            if f.form.is_zero:
                raise ValueError("weight factor must be a nonzero polynomial")
            if f.form.degree != 1:
                raise ValueError(
                    f"weight factor {format_poly(f.form)!r} must have degree 1")
            if f.exponent <= -1:
                # integrability on a domain whose boundary the factor touches
                raise ValueError(
                    f"factor exponent {f.exponent} must be greater than -1")

    @classmethod
    def triangle(cls, alpha, beta, gamma):
        """x1^alpha * x2^beta * (1 - x1 - x2)^gamma on the unit triangle."""
        return cls(((X1, _exact(alpha)), (X2, _exact(beta)),
                    (1 - X1 - X2, _exact(gamma))))

    def denominator(self):
        """prod q_i, the common denominator of the log-gradient."""
        out = Poly2.constant(1)
        for f in self.factors:
            out = out * f.form
        return out

    def log_gradient_numerators(self):
        """Polynomials (g1, g2) with grad(rho)/rho = (g1, g2)/denominator."""
        out = [Poly2.zero(), Poly2.zero()]
        for k, f in enumerate(self.factors):
            rest = Poly2.constant(1)
            for m, other in enumerate(self.factors):
                if m != k:
                    rest = rest * other.form
            for axis in (1, 2):
                out[axis - 1] = out[axis - 1] + \
                    f.exponent * f.form.diff(axis) * rest
        return tuple(out)

    def density(self, x1, x2):
        """Evaluate rho at an interior point (float)."""
        out = 1.0
        for f in self.factors:
            out *= float(f.form(x1, x2)) ** float(f.exponent)
        return out


@dataclass(frozen=True)
class Edge:
    """Straight boundary edge: vanishing linear form + outward direction.

    ``direction`` is an exact rational outward vector; divisibility checks
    are invariant under positive rescaling, so no normalization is applied
    there.  ``unit_normal`` is the normalized float vector for reporting.
    """

    form: Poly2
    direction: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "direction",
            (_exact(self.direction[0]), _exact(self.direction[1])))

    @property
    def unit_normal(self):
        n1, n2 = float(self.direction[0]), float(self.direction[1])
        norm = math.hypot(n1, n2)
        return (n1 / norm, n2 / norm)


@dataclass(frozen=True)
class DomainEdges:
    edges: tuple


def triangle_edges():
    """Edges of the unit triangle x1, x2 >= 0, x1 + x2 <= 1."""
    return DomainEdges((
        Edge(X1, (-1, 0)),
        Edge(X2, (0, -1)),
        Edge(1 - X1 - X2, (1, 1)),
    ))


def triangle_matrix():
    """The degenerate diffusion matrix [[x1(1-x1), -x1x2], [-x1x2, x2(1-x2)]]."""
    return MatPoly2(X1 * (1 - X1), -X1 * X2, X2 * (1 - X2))


def identity_matrix():
    return MatPoly2(1, 0, 1)


@dataclass(frozen=True)
class PearsonData:
    """Affine right-hand side of div(rho*Phi) = rho*(psi1, psi2).

    ``direction`` is the 2x2 matrix whose columns are the linear parts of
    psi1 and psi2; ``constants`` are their constant terms.
    """

    psi1: Poly2
    psi2: Poly2
    direction: tuple
    constants: tuple

    @property
    def det(self):
        (a, b), (c, d) = self.direction
        return a * d - b * c


def pearson_check(phi, weight):
    """Solve div(rho*Phi) = rho*psi for affine psi, or fail.

    Multiplying through by D = prod q_i turns the j-th component into the
    polynomial P_j = D * sum_i dPhi_ij/dx_i + sum_i g_i * Phi_ij, which must
    be exactly divisible by D with an affine quotient and nondegenerate
    linear parts.  Raises WeightCheckError with stage ``not_divisible``,
    ``psi_not_affine`` or ``degenerate_directions``.  Matrix entries of
    degree > 2 are not rejected up front; they surface as a failing stage
    (a quadratic-or-worse quotient).
    """
    den = weight.denominator()
    g1, g2 = weight.log_gradient_numerators()
    psi = []
    for j in (1, 2):
        p_j = den * (phi.entry(1, j).diff(1) + phi.entry(2, j).diff(2)) \
            + g1 * phi.entry(1, j) + g2 * phi.entry(2, j)
        try:
            q = p_j.divexact(den)
        except NotDivisibleError:
            raise WeightCheckError(
                "not_divisible",
                f"component {j}: {format_poly(p_j)} is not divisible by "
                f"{format_poly(den)}") from None
        psi.append(q)
    for j, q in enumerate(psi, start=1):
        if q.degree > 1:
            raise WeightCheckError(
                "psi_not_affine",
                f"psi{j} = {format_poly(q)} has degree {q.degree}")
    direction = ((psi[0].coefficient(1, 0), psi[1].coefficient(1, 0)),
                 (psi[0].coefficient(0, 1), psi[1].coefficient(0, 1)))
    data = PearsonData(
        psi1=psi[0], psi2=psi[1], direction=direction,
        constants=(psi[0].coefficient(0, 0), psi[1].coefficient(0, 0)))
    if data.det == 0:
        raise WeightCheckError(
            "degenerate_directions",
            "linear parts of psi1, psi2 are linearly dependent")
    return data


@dataclass(frozen=True)
class EdgeCheck:
    index: int
    form: Poly2
    passed: bool
    failing_component: int = None


@dataclass(frozen=True)
class BoundaryResult:
    checks: tuple

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    @property
    def first_failure(self):
        for c in self.checks:
            if not c.passed:
                return c
        return None


def boundary_check(phi, edges):
    """Edgewise Neumann-type condition: each edge form divides Phi*n.

    On a straight edge where the form ell vanishes, ell | (Phi n)_k for
    k = 1, 2 makes (rho Phi grad p) . n carry a factor rho * ell, which
    vanishes on the edge for every polynomial p whenever the edge exponent
    exceeds -1.  Divisibility is scale-free, so any positive multiple of
    the outward direction gives the same verdict.
    """
    checks = []
    for idx, edge in enumerate(edges.edges):
        flux = phi.matvec(edge.direction)
        failing = None
        for k, component in enumerate(flux, start=1):
            try:
                component.divexact(edge.form)
            except NotDivisibleError:
                failing = k
                break
        checks.append(EdgeCheck(index=idx, form=edge.form,
                                passed=failing is None,
                                failing_component=failing))
    return BoundaryResult(tuple(checks))


@dataclass(frozen=True)
class SystemResult:
    orientation: str
    passed: bool
    residuals: tuple  # two 2x2 nested tuples of Poly2


def _gradient_pair(p1, p2, orientation):
    rows = ((p1.diff(1), p2.diff(1)), (p1.diff(2), p2.diff(2)))
    if orientation == "A":  # rows indexed by derivative axis
        return rows
    if orientation == "B":  # columns indexed by derivative axis
        return ((rows[0][0], rows[1][0]), (rows[0][1], rows[1][1]))
    raise ValueError("orientation must be 'A' or 'B'")


def _matmul(phi, other):
    rows = ((phi.e11, phi.e12), (phi.e12, phi.e22))
    return tuple(
        tuple(rows[i][0] * other[0][j] + rows[i][1] * other[1][j]
              for j in range(2))
        for i in range(2))


def differential_system_check(phi, orientation="A"):
    """Auxiliary first-order matrix system for the columns of Phi.

    Checks phi_1j * dPhi/dx1 + phi_2j * dPhi/dx2 = Phi * grad(phi_1j, phi_2j)
    for j = 1, 2, as exact polynomial identities.  The gradient of a pair is
    ambiguous in the literature, so both layouts are supported: orientation
    "A" puts derivative axes along rows, "B" along columns.
    """
    d1, d2 = phi.diff(1), phi.diff(2)
    residuals = []
    for pair in ((phi.e11, phi.e12), (phi.e12, phi.e22)):
        lhs = tuple(
            tuple(pair[0] * d1.entry(i, j) + pair[1] * d2.entry(i, j)
                  for j in (1, 2))
            for i in (1, 2))
        rhs = _matmul(phi, _gradient_pair(pair[0], pair[1], orientation))
        residuals.append(tuple(
            tuple(lhs[i][j] - rhs[i][j] for j in range(2))
            for i in range(2)))
    passed = all(entry.is_zero
                 for res in residuals for row in res for entry in row)
    return SystemResult(orientation=orientation, passed=passed,
                        residuals=tuple(residuals))


def divergence_factor(v1, v2, phi, pearson):
    """The polynomial K with div(rho * Phi * v) = K * rho.

    Requires ``pearson`` produced by :func:`pearson_check` for the same
    matrix and weight.
    """
    return (pearson.psi1 * v1 + pearson.psi2 * v2
            + phi.entry(1, 1) * v1.diff(1) + phi.entry(2, 1) * v1.diff(2)
            + phi.entry(1, 2) * v2.diff(1) + phi.entry(2, 2) * v2.diff(2))


@dataclass(frozen=True)
class WeightVerification:
    pearson_ok: bool
    pearson_stage: str
    pearson: PearsonData
    boundary: BoundaryResult
    system_a: SystemResult
    system_b: SystemResult

    @property
    def classical(self):
        """Pearson + boundary + the differential system in some layout."""
        return (self.pearson_ok and self.boundary.passed
                and (self.system_a.passed or self.system_b.passed))


def verify_weight(phi, weight, edges):
    """Run all three structure checks and collect a non-raising report."""
    try:
        pearson = pearson_check(phi, weight)
        pearson_ok, stage = True, None
    except WeightCheckError as err:
        pearson, pearson_ok, stage = None, False, err.stage
    return WeightVerification(
        pearson_ok=pearson_ok,
        pearson_stage=stage,
        pearson=pearson,
        boundary=boundary_check(phi, edges),
        system_a=differential_system_check(phi, "A"),
        system_b=differential_system_check(phi, "B"),
    )
