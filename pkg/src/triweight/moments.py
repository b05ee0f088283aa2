"""Dirichlet moments of the Jacobi triangle weight and quadrature rules.

The weight x1^alpha * x2^beta * (1 - x1 - x2)^gamma on the unit triangle
has moments

    mu(m, n) = integral of x1^m x2^n rho
             = Gamma(alpha+m+1) Gamma(beta+n+1) Gamma(gamma+1)
               / Gamma(alpha+beta+gamma+m+n+3),

so mu(0, 0) follows from log-Gamma once and higher moments follow from the
overflow-free ratio recurrences

    mu(m+1, n) = mu(m, n) * (alpha+m+1) / (alpha+beta+gamma+m+n+3)
    mu(m, n+1) = mu(m, n) * (beta+n+1)  / (alpha+beta+gamma+m+n+3).

The ratios mu(m, n)/mu(0, 0) are exact rationals for rational parameters,
which is what makes exact Galerkin assembly possible; mu(0, 0) itself is
rational exactly when all three exponents are nonnegative integers.

Quadrature is Gauss-Jacobi via Golub-Welsch (recurrence coefficients from
Gautschi, "Orthogonal Polynomials: Computation and Approximation"),
tensorized over the Duffy substitution x1 = u, x2 = (1-u)v, which maps the
triangle integral to

    int_0^1 int_0^1 f(u, (1-u)v) u^alpha (1-u)^(beta+gamma+1)
                                 v^beta (1-v)^gamma du dv.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ._exact import QQ, to_fraction
from .linalg import sym_eig
from .poly import Poly2


class TriangleWeightParams:
    """Exponents (alpha, beta, gamma), each strictly greater than -1.

    Values are stored as exact rationals; floats convert to their exact
    binary value, so pass a Fraction or a string like "1/3" for non-dyadic
    rationals.
    """

    __slots__ = ("alpha", "beta", "gamma")

    def __init__(self, alpha, beta, gamma):
        for name, value in (("alpha", alpha), ("beta", beta),
                            ("gamma", gamma)):
            value = Fraction(value)
            if value <= -1:
                raise ValueError(
                    f"{name} = {value} violates integrability "
                    f"(must exceed -1)")
            object.__setattr__(self, name, value)

    def __setattr__(self, name, value):
        raise AttributeError("TriangleWeightParams is immutable")

    @property
    def total(self):
        return self.alpha + self.beta + self.gamma

    @property
    def is_integral(self):
        return all(v.denominator == 1
                   for v in (self.alpha, self.beta, self.gamma))

    def astuple(self):
        return (self.alpha, self.beta, self.gamma)

    def __eq__(self, other):
        if not isinstance(other, TriangleWeightParams):
            return NotImplemented
        return self.astuple() == other.astuple()

    def __hash__(self):
        return hash(self.astuple())

    def __repr__(self):
        return (f"TriangleWeightParams({self.alpha!s}, {self.beta!s}, "
                f"{self.gamma!s})")


def log_mass(params):
    """log of mu(0, 0) via log-Gamma differences (no overflow)."""
    a, b, g = (float(v) for v in params.astuple())
    return (math.lgamma(a + 1) + math.lgamma(b + 1) + math.lgamma(g + 1)
            - math.lgamma(a + b + g + 3))


def mass(params):
    """mu(0, 0) as a float (exact value rounded when exponents are integers)."""
    if params.is_integral:
        return float(mass_exact(params))
    return math.exp(log_mass(params))


def mass_exact(params):
    """mu(0, 0) as an exact Fraction; requires integer exponents."""
    if not params.is_integral:
        raise ValueError("exact mass needs nonnegative integer exponents")
    a, b, g = (int(v) for v in params.astuple())
    return Fraction(
        math.factorial(a) * math.factorial(b) * math.factorial(g),
        math.factorial(a + b + g + 2))


@lru_cache(maxsize=None)
def moment_ratio(m, n, params):
    """Exact mu(m, n) / mu(0, 0) for any rational parameters."""
    if m < 0 or n < 0:
        raise ValueError("moment orders must be nonnegative")
    if m == 0 and n == 0:
        return Fraction(1)
    t = params.total
    if n > 0:
        return moment_ratio(m, n - 1, params) * \
            Fraction(params.beta + n) / (t + m + n + 2)
    return moment_ratio(m - 1, 0, params) * \
        Fraction(params.alpha + m) / (t + m + 2)


def moment_ratio_table(params, max_total):
    """All exact ratios mu(m, n)/mu(0, 0) with m + n <= max_total.

    Bulk variant of :func:`moment_ratio` on the fast rational backend; used
    by Galerkin assembly.
    """
    a = QQ(params.alpha.numerator, params.alpha.denominator)
    b = QQ(params.beta.numerator, params.beta.denominator)
    t = a + b + QQ(params.gamma.numerator, params.gamma.denominator)
    table = {(0, 0): QQ(1)}
    for m in range(max_total + 1):
        if m > 0:
            table[(m, 0)] = table[(m - 1, 0)] * (a + m) / (t + m + 2)
        base = table[(m, 0)]
        for n in range(1, max_total - m + 1):
            base = base * (b + n) / (t + m + n + 2)
            table[(m, n)] = base
    return table


def dirichlet_moment(m, n, params):
    """mu(m, n) as a float, computed by recurrence from mu(0, 0)."""
    return float(moment_ratio(m, n, params)) * mass(params)


def dirichlet_moment_exact(m, n, params):
    """mu(m, n) as an exact Fraction; requires integer exponents."""
    return moment_ratio(m, n, params) * mass_exact(params)


def integrate_poly(q, params):
    """Integrate a polynomial against the triangle weight.

    Returns an exact Fraction when the exponents are integers and every
    coefficient is rational; a float otherwise.
    """
    if params.is_integral and not q.has_float_coefficients:
        mu0 = mass_exact(params)
        total = Fraction(0)
        for (i, j), c in q.terms():
            total += c * moment_ratio(i, j, params) * mu0
        return total
    mu0 = mass(params)
    total = 0.0
    for (i, j), c in q.terms():
        total += float(c) * float(moment_ratio(i, j, params)) * mu0
    return total


def _jacobi_recurrence(n, a, b):
    """Three-term recurrence for Jacobi weight (1-t)^a (1+t)^b on [-1, 1].

    Returns diagonal alpha_k and off-diagonal-squared beta_k (beta_0 is the
    total mass).
    """
    alpha = np.zeros(n)
    beta = np.zeros(n)
    apb = a + b
    alpha[0] = (b - a) / (apb + 2.0)
    beta[0] = math.exp((apb + 1.0) * math.log(2.0)
                       + math.lgamma(a + 1.0) + math.lgamma(b + 1.0)
                       - math.lgamma(apb + 2.0))
    if n > 1:
        alpha[1] = (b * b - a * a) / ((apb + 2.0) * (apb + 4.0))
        beta[1] = 4.0 * (a + 1.0) * (b + 1.0) / \
            ((apb + 2.0) ** 2 * (apb + 3.0))
    for k in range(2, n):
        den = 2.0 * k + apb
        alpha[k] = (b * b - a * a) / (den * (den + 2.0))
        beta[k] = 4.0 * k * (k + a) * (k + b) * (k + apb) / \
            (den * den * (den + 1.0) * (den - 1.0))
    return alpha, beta


def gauss_jacobi(n, a, b):
    """n-point Gauss rule on [0, 1] for the weight x^a (1-x)^b.

    Golub-Welsch: nodes are eigenvalues of the symmetrized Jacobi matrix,
    weights come from the squared first eigenvector components scaled by
    the total mass B(a+1, b+1).  Exact for polynomials of degree 2n-1.
    """
    if n < 1:
        raise ValueError("rule needs at least one node")
    a = float(a)
    b = float(b)
    if a <= -1.0 or b <= -1.0:
        raise ValueError(f"Jacobi exponents ({a}, {b}) must exceed -1")
    # [0,1] weight x^a (1-x)^b maps to the (b, a) Jacobi weight on [-1,1]
    alpha, beta = _jacobi_recurrence(n, b, a)
    jac = np.diag(alpha)
    if n > 1:
        off = np.sqrt(beta[1:])
        jac += np.diag(off, -1) + np.diag(off, 1)
    values, vectors = sym_eig(jac)
    nodes = 0.5 * (values + 1.0)
    weights = beta[0] * vectors[0, :] ** 2 / 2.0 ** (a + b + 1.0)
    return nodes, weights


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Positive-weight rule with nodes strictly inside the open triangle."""

    nodes: np.ndarray          # shape (npoints, 2)
    weights: np.ndarray        # shape (npoints,)
    exactness_degree: int
    params: TriangleWeightParams = field(default=None)

    def integrate(self, f):
        """Integrate a Poly2 or an (x1, x2) callable against the weight."""
        if isinstance(f, Poly2):
            values = np.array(
                [float(f(x1, x2)) for x1, x2 in self.nodes])
        else:
            values = np.array([f(x1, x2) for x1, x2 in self.nodes])
        return float(self.weights @ values)


def triangle_rule(n, params):
    """Duffy-tensorized Gauss-Jacobi rule for the triangle weight.

    The substitution x1 = u, x2 = (1-u)v absorbs the Jacobian and the
    hypotenuse factor into the u-direction exponent, giving the tensor
    product of gauss_jacobi(n, alpha, beta+gamma+1) and
    gauss_jacobi(n, beta, gamma).  The recorded exactness degree n-1 is a
    conservative total-degree guarantee.
    """
    a, b, g = (float(v) for v in params.astuple())
    u_nodes, u_weights = gauss_jacobi(n, a, b + g + 1.0)
    v_nodes, v_weights = gauss_jacobi(n, b, g)
    x1 = np.repeat(u_nodes, n)
    x2 = np.outer(1.0 - u_nodes, v_nodes).ravel()
    w = np.outer(u_weights, v_weights).ravel()
    return QuadratureRule(nodes=np.column_stack([x1, x2]), weights=w,
                          exactness_degree=n - 1, params=params)
