"""Weighted polynomial Galerkin machinery on the unit triangle.

Basis construction and matrix assembly run in exact rational arithmetic.
The monomial Gram matrix of the triangle weight is Hilbert-matrix-like
(floating Cholesky loses definiteness around degree 12), so the
orthogonalization is done as exact Gram-Schmidt on the scaled moments
mu(m, n)/mu(0, 0), which are rational for rational exponents.  The raw
orthogonal polynomials keep small rational coefficients; the square-root
normalization factors are the only floating-point ingredient and are
applied at the very end.  Assembled mass matrices therefore equal the
identity to the last bit at any practical degree.

A floating construction path is kept alongside (``mode="float"``); it is
the one that can legitimately fail with a pivot error and is also used as
an independent cross-check at low degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._exact import QQ, to_fraction
from . import linalg
from .linalg import NotSPDError, cholesky, solve_lower, solve_spd, sym_eig
from .moments import (TriangleWeightParams, integrate_poly, mass,
                      moment_ratio_table, triangle_rule)
from .poly import Poly2, X1, X2
from .weights import triangle_matrix

FactorizationError = NotSPDError

HELMHOLTZ_POTENTIAL = 2 + X1 ** 2 + X2 ** 2


def monomial_exponents(degree):
    """Graded-lex monomial exponents spanning total degree <= degree."""
    return [(d - k, k) for d in range(degree + 1) for k in range(d + 1)]


def _poly_terms_qq(p):
    """Polynomial terms as {(i, j): QQ}; float coefficients convert to
    their exact binary rationals."""
    out = {}
    for e, c in p.terms():
        if isinstance(c, float):
            c = Fraction(c)
        out[e] = QQ(c.numerator, c.denominator)
    return out


def _gram_schmidt(monos, mom):
    """Exact Gram-Schmidt of the graded-lex monomials.

    Returns (columns, norms): each column maps monomial index -> QQ
    coefficient of a raw orthogonal polynomial (monic in its leading
    monomial), and norms[k] = <r_k, r_k> relative to mu(0, 0).
    """
    columns = []
    norms = []
    for k, mk in enumerate(monos):
        coeffs = {k: QQ(1)}
        for l, col in enumerate(columns):
            s = QQ(0)
            for q, c in col.items():
                mq = monos[q]
                s += c * mom[(mk[0] + mq[0], mk[1] + mq[1])]
            proj = s / norms[l]
            if proj:
                for q, c in col.items():
                    coeffs[q] = coeffs.get(q, QQ(0)) - proj * c
        coeffs = {q: c for q, c in coeffs.items() if c}
        h = QQ(0)
        for p, a in coeffs.items():
            mp = monos[p]
            for q, b in coeffs.items():
                mq = monos[q]
                h += a * b * mom[(mp[0] + mq[0], mp[1] + mq[1])]
        if h <= 0:
            raise FactorizationError(k, float(h))
        columns.append(coeffs)
        norms.append(h)
    return columns, norms


class BasisSet:
    """Orthonormal polynomial basis of total degree <= degree.

    ``functions`` carry float coefficients (normalization involves square
    roots); ``raw_functions`` are the exact rational orthogonal
    polynomials with raw_functions[k] = scales[k] * functions[k], and
    ``transform`` is the lower-triangular change of basis from graded-lex
    monomials with positive diagonal.
    """

    def __init__(self, degree, params, monomials, columns, norms, mode):
        self.degree = degree
        self.params = params
        self.monomials = monomials
        self.mode = mode
        self._columns = columns      # exact GS columns, or None in float mode
        self._norms = norms          # exact squared norms / mu00, or None
        mu0 = mass(params)
        n = len(monomials)
        if columns is not None:
            self.scales = np.array(
                [math.sqrt(float(h) * mu0) for h in norms])
            transform = np.zeros((n, n))
            for k, col in enumerate(columns):
                for q, c in col.items():
                    transform[k, q] = float(c) / self.scales[k]
            self.transform = transform
            self.raw_functions = tuple(
                Poly2({monomials[q]: to_fraction(c) for q, c in col.items()})
                for col in columns)
            self.raw_norms = tuple(to_fraction(h) for h in norms)
        else:
            self.scales = None
            self.transform = None    # set by the float constructor
            self.raw_functions = None
            self.raw_norms = None

    @property
    def dimension(self):
        return len(self.monomials)

    @property
    def functions(self):
        return tuple(self.polynomial(row) for row in np.eye(self.dimension))

    def polynomial(self, coeffs):
        """The float-coefficient polynomial sum_k coeffs[k] * b_k."""
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape != (self.dimension,):
            raise ValueError(
                f"expected {self.dimension} coefficients, got {coeffs.shape}")
        flat = coeffs @ self.transform
        return Poly2({e: c for e, c in zip(self.monomials, flat) if c != 0.0})


def build_basis(degree, params, mode="exact"):
    """Orthonormalize the graded-lex monomials against the triangle weight.

    ``mode="exact"`` (default) runs rational Gram-Schmidt and cannot lose
    definiteness.  ``mode="float"`` builds the floating Gram matrix and
    Cholesky-factorizes it; around degree 12 and beyond this raises
    FactorizationError with the failing pivot index, which is the intended
    conditioning diagnostic.
    """
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    monos = monomial_exponents(degree)
    if mode == "exact":
        mom = moment_ratio_table(params, 2 * degree)
        columns, norms = _gram_schmidt(monos, mom)
        return BasisSet(degree, params, monos, columns, norms, mode)
    if mode != "float":
        raise ValueError("mode must be 'exact' or 'float'")
    mom = moment_ratio_table(params, 2 * degree)
    mu0 = mass(params)
    n = len(monos)
    gram = np.empty((n, n))
    for p in range(n):
        for q in range(p, n):
            e = (monos[p][0] + monos[q][0], monos[p][1] + monos[q][1])
            gram[p, q] = gram[q, p] = float(mom[e]) * mu0
    low = cholesky(gram)   # raises FactorizationError when ill-conditioned
    basis = BasisSet(degree, params, monos, None, None, mode)
    basis.transform = solve_lower(low, np.eye(n))
    basis.scales = np.diag(low).copy()
    return basis


@dataclass(frozen=True, eq=False)
class GramSet:
    """Assembled mass / stiffness / potential matrices for one basis."""

    mass: np.ndarray
    stiffness: np.ndarray
    potential: np.ndarray
    basis: BasisSet = field(repr=False)

    @property
    def system(self):
        """stiffness + potential, the discrete bilinear form."""
        return self.stiffness + self.potential


def _form_matrices(monos, phi_terms, c_terms, mom):
    """Monomial-basis (mass, stiffness, potential) with exact QQ entries,
    relative to mu(0, 0)."""
    n = len(monos)
    mass_f = [[QQ(0)] * n for _ in range(n)]
    stiff_f = [[QQ(0)] * n for _ in range(n)]
    pot_f = [[QQ(0)] * n for _ in range(n)]
    contributions = (((1, 1), phi_terms[0]), ((1, 2), phi_terms[1]),
                     ((2, 1), phi_terms[1]), ((2, 2), phi_terms[2]))
    for p in range(n):
        ip, jp = monos[p]
        for q in range(p, n):
            iq, jq = monos[q]
            m = mom[(ip + iq, jp + jq)]
            v = QQ(0)
            for (ei, ej), c in c_terms.items():
                v += c * mom[(ip + iq + ei, jp + jq + ej)]
            s = QQ(0)
            for (a, b), terms in contributions:
                cp = ip if a == 1 else jp
                cq = iq if b == 1 else jq
                if cp == 0 or cq == 0:
                    continue
                di = ip + iq - (1 if a == 1 else 0) - (1 if b == 1 else 0)
                dj = jp + jq - (0 if a == 1 else 1) - (0 if b == 1 else 1)
                for (ei, ej), c in terms.items():
                    s += cp * cq * c * mom[(di + ei, dj + ej)]
            mass_f[p][q] = mass_f[q][p] = m
            stiff_f[p][q] = stiff_f[q][p] = s
            pot_f[p][q] = pot_f[q][p] = v
    return mass_f, stiff_f, pot_f


def _lcm(a, b):
    return a // math.gcd(a, b) * b


def _integer_columns(columns):
    ints, dens = [], []
    for col in columns:
        den = 1
        for c in col.values():
            den = _lcm(den, int(c.denominator))
        ints.append({q: int(c * den) for q, c in col.items()})
        dens.append(den)
    return ints, dens


def _congruence(form, col_ints, col_dens, norms):
    """Float matrix of <r_i, . , r_k> / (scale_i * scale_k).

    The triple product C^T F C runs over scaled integers (no intermediate
    rounding); each entry is divided exactly and normalized by the
    square-root scales only at the final float conversion.
    """
    n = len(col_ints)
    z = 1
    for row in form:
        for c in row:
            z = _lcm(z, int(c.denominator))
    form_int = [[int(c * z) for c in row] for row in form]
    half = []
    for k in range(n):
        w = [0] * n
        for q, cv in col_ints[k].items():
            row = form_int[q]
            for p in range(n):
                w[p] += cv * row[p]
        half.append(w)
    out = np.empty((n, n))
    for i in range(n):
        ci = col_ints[i]
        for k in range(i, n):
            wk = half[k]
            acc = 0
            for q, cv in ci.items():
                acc += cv * wk[q]
            value = float(Fraction(acc, col_dens[i] * col_dens[k] * z)) \
                / math.sqrt(float(norms[i]) * float(norms[k]))
            out[i, k] = out[k, i] = value
    return out


def assemble(basis, phi=None, params=None):
    """Assemble mass, stiffness and potential matrices for the basis.

    Entries come from exact polynomial expansion plus moment summation
    (never quadrature).  ``params`` must match the basis weight; ``phi``
    defaults to the triangle matrix.
    """
    if phi is None:
        phi = triangle_matrix()
    if params is None:
        params = basis.params
    if params != basis.params:
        raise ValueError("basis was built for different weight parameters")
    monos = basis.monomials
    phi_terms = (_poly_terms_qq(phi.e11), _poly_terms_qq(phi.e12),
                 _poly_terms_qq(phi.e22))
    c_terms = _poly_terms_qq(HELMHOLTZ_POTENTIAL)
    max_total = 2 * basis.degree + max(
        phi.max_degree, HELMHOLTZ_POTENTIAL.degree)
    mom = moment_ratio_table(params, max_total)
    mass_f, stiff_f, pot_f = _form_matrices(monos, phi_terms, c_terms, mom)
    if basis._columns is not None:
        col_ints, col_dens = _integer_columns(basis._columns)
        norms = basis._norms
        mass_m = _congruence(mass_f, col_ints, col_dens, norms)
        stiff_m = _congruence(stiff_f, col_ints, col_dens, norms)
        pot_m = _congruence(pot_f, col_ints, col_dens, norms)
    else:
        mu0 = mass(params)
        t = basis.transform

        def lift(form):
            dense = np.array([[float(c) for c in row] for row in form]) * mu0
            out = t @ dense @ t.T
            return 0.5 * (out + out.T)

        mass_m, stiff_m, pot_m = lift(mass_f), lift(stiff_f), lift(pot_f)
    return GramSet(mass=mass_m, stiffness=stiff_m, potential=pot_m,
                   basis=basis)


def monomial_grams(degree, params, phi=None):
    """Float (mass, stiffness, potential) in the raw monomial basis.

    Deliberately *not* orthonormalized; at modest degree this feeds the
    generalized eigenvalue path.
    """
    if phi is None:
        phi = triangle_matrix()
    monos = monomial_exponents(degree)
    phi_terms = (_poly_terms_qq(phi.e11), _poly_terms_qq(phi.e12),
                 _poly_terms_qq(phi.e22))
    c_terms = _poly_terms_qq(HELMHOLTZ_POTENTIAL)
    max_total = 2 * degree + max(phi.max_degree, HELMHOLTZ_POTENTIAL.degree)
    mom = moment_ratio_table(params, max_total)
    mu0 = mass(params)
    out = []
    for form in _form_matrices(monos, phi_terms, c_terms, mom):
        out.append(np.array([[float(c) for c in row] for row in form]) * mu0)
    return tuple(out)


def sobolev_norm_squared(u, phi=None, params=None):
    """integral of u^2 rho plus (grad u)^T Phi (grad u) rho; exact when the
    exponents are integers and u has rational coefficients."""
    if phi is None:
        phi = triangle_matrix()
    du1, du2 = u.diff(1), u.diff(2)
    gradient_part = (phi.e11 * du1 * du1 + 2 * phi.e12 * du1 * du2
                     + phi.e22 * du2 * du2)
    return integrate_poly(u * u + gradient_part, params)


def sobolev_norm(u, phi=None, params=None):
    return math.sqrt(float(sobolev_norm_squared(u, phi, params)))


def bilinear_form(u, v, phi=None, params=None):
    """a(u, v) = integral of (grad v)^T Phi (grad u) rho + c u v rho."""
    if phi is None:
        phi = triangle_matrix()
    du1, du2 = u.diff(1), u.diff(2)
    dv1, dv2 = v.diff(1), v.diff(2)
    gradient_part = (phi.e11 * du1 * dv1 + phi.e12 * (du1 * dv2 + du2 * dv1)
                     + phi.e22 * du2 * dv2)
    return integrate_poly(gradient_part + HELMHOLTZ_POTENTIAL * u * v, params)


def apply_helmholtz(u, params):
    """Apply the degenerate Helmholtz operator symbolically.

    L u = -x1(1-x1) u_11 + 2 x1 x2 u_12 - x2(1-x2) u_22
          - psi1 u_1 - psi2 u_2 + (2 + x1^2 + x2^2) u,

    with the affine drift psi determined by the weight exponents through
    the Pearson identity.  Output degree is at most deg(u) + 2.
    """
    s = params.total + 3
    psi1 = Poly2({(0, 0): params.alpha + 1, (1, 0): -s})
    psi2 = Poly2({(0, 0): params.beta + 1, (0, 1): -s})
    phi = triangle_matrix()
    u1, u2 = u.diff(1), u.diff(2)
    return (- phi.e11 * u1.diff(1) - 2 * phi.e12 * u1.diff(2)
            - phi.e22 * u2.diff(2)
            - psi1 * u1 - psi2 * u2 + HELMHOLTZ_POTENTIAL * u)


def load_vector(f, basis):
    """Load vector <f, b_k> for every basis function.

    Polynomial data integrates exactly through moments; callable data is
    integrated by a Duffy rule of order degree + 4 and is therefore
    approximate.
    """
    params = basis.params
    if isinstance(f, Poly2):
        if basis._columns is not None:
            f_terms = _poly_terms_qq(f)
            mom = moment_ratio_table(
                params, max(f.degree, 0) + basis.degree)
            mu0 = mass(params)
            out = np.empty(basis.dimension)
            for k, col in enumerate(basis._columns):
                acc = QQ(0)
                for q, c in col.items():
                    mq = basis.monomials[q]
                    for (i, j), fc in f_terms.items():
                        acc += c * fc * mom[(mq[0] + i, mq[1] + j)]
                out[k] = float(acc) * mu0 / basis.scales[k]
            return out
        rhs = np.empty(basis.dimension)
        for k in range(basis.dimension):
            rhs[k] = float(integrate_poly(
                f * basis.polynomial(np.eye(basis.dimension)[k]), params))
        return rhs
    # non-polynomial data: quadrature of fixed elevated order (approximate)
    rule = triangle_rule(basis.degree + 4, params)
    values = np.array([f(x1, x2) for x1, x2 in rule.nodes])
    vander = np.array([[float(b(x1, x2)) for b in basis.functions]
                       for x1, x2 in rule.nodes])
    return vander.T @ (rule.weights * values)


def solve_weak(f, degree, params, phi=None, basis=None):
    """Galerkin solution coefficients of the weak problem a(u, v) = <f, v>.

    Returns the coefficient vector in the orthonormal basis (use
    ``basis.polynomial`` to expand).  If f = L u* for a polynomial u* inside
    the basis span, the projection recovers u* up to solver roundoff.
    """
    if basis is None:
        basis = build_basis(degree, params)
    grams = assemble(basis, phi, params)
    rhs = load_vector(f, basis)
    return solve_spd(grams.system, rhs)


@dataclass(frozen=True, eq=False)
class EigResult:
    """Ascending Ritz values with mass-orthonormal coefficient vectors."""

    values: np.ndarray
    vectors: np.ndarray
    degree: int
    basis: BasisSet = field(repr=False)

    @property
    def reciprocals(self):
        """Eigenvalues of the compact inverse (1/values, descending)."""
        return 1.0 / self.values


def eigensolve(grams):
    """Ritz eigensystem of an assembled GramSet.

    Uses the plain symmetric solver when the mass matrix is the identity
    (orthonormal basis); otherwise reduces the generalized pencil by
    Cholesky congruence.  Vectors come out mass-orthonormal either way.
    """
    n = grams.mass.shape[0]
    defect = np.abs(grams.mass - np.eye(n)).max()
    if defect <= 1e-12:
        values, vectors = sym_eig(grams.system)
    else:
        values, vectors = linalg.eig_generalized(grams.system, grams.mass)
    return EigResult(values=values, vectors=vectors,
                     degree=grams.basis.degree, basis=grams.basis)


def solve_eig(degree, params, phi=None, basis=None):
    """Build, assemble and solve the Ritz eigenproblem at the given degree."""
    if basis is None:
        basis = build_basis(degree, params)
    return eigensolve(assemble(basis, phi, params))
