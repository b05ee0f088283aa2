"""Dense symmetric linear algebra kernels.

Self-contained Cholesky factorization and a symmetric eigensolver
(Householder tridiagonalization followed by implicit-shift QL, after
EISPACK tred2/tql2), so factorization tolerances stay auditable.  numpy
arrays are used for storage and vectorized row/column updates only; no
LAPACK driver is called.  Matrices are plain dense ndarrays; symmetry is
the caller's contract and is validated cheaply where it matters.
"""

from __future__ import annotations

import math

import numpy as np

_EPS = np.finfo(float).eps


class NotSPDError(ArithmeticError):
    """Cholesky pivot failure; ``pivot`` is the 0-based failing index."""

    def __init__(self, pivot, value):
        super().__init__(
            f"matrix is not positive definite: pivot {pivot} = {value:.3e}")
        self.pivot = pivot
        self.value = value


class NoConvergenceError(ArithmeticError):
    """Eigen iteration exceeded its sweep budget."""


def _as_square(a):
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def check_symmetric(a, rtol=1e-12):
    a = _as_square(a)
    scale = np.abs(a).max() or 1.0
    defect = np.abs(a - a.T).max()
    if defect > rtol * scale:
        raise ValueError(f"matrix is not symmetric (defect {defect:.3e})")
    return a


def cholesky(a):
    """Lower-triangular L with L L^T = a, or NotSPDError at the first
    nonpositive pivot."""
    a = _as_square(a)
    n = a.shape[0]
    low = np.zeros_like(a)
    for j in range(n):
        s = a[j, j] - low[j, :j] @ low[j, :j]
        if s <= 0.0:
            raise NotSPDError(j, s)
        low[j, j] = math.sqrt(s)
        if j + 1 < n:
            low[j + 1:, j] = (a[j + 1:, j] - low[j + 1:, :j] @ low[j, :j]) \
                / low[j, j]
    return low


def solve_lower(low, b):
    """Solve low @ x = b (low lower-triangular); b may hold many columns."""
    x = np.array(b, dtype=float, copy=True)
    n = low.shape[0]
    for i in range(n):
        x[i] -= low[i, :i] @ x[:i]
        x[i] /= low[i, i]
    return x


def solve_lower_t(low, b):
    """Solve low.T @ x = b."""
    x = np.array(b, dtype=float, copy=True)
    n = low.shape[0]
    for i in reversed(range(n)):
        x[i] -= low[i + 1:, i] @ x[i + 1:]
        x[i] /= low[i, i]
    return x


def solve_spd(a, b):
    """Solve a @ x = b for symmetric positive definite a via Cholesky."""
    low = cholesky(a)
    return solve_lower_t(low, solve_lower(low, b))


def _tridiagonalize(a):
    """Householder reduction: returns (d, e, q) with a = q T q^T where T is
    tridiagonal with diagonal d and subdiagonal e."""
    a = a.copy()
    n = a.shape[0]
    q = np.eye(n)
    for k in range(n - 2):
        x = a[k + 1:, k]
        norm_x = np.linalg.norm(x)
        if norm_x == 0.0:
            continue
        alpha = -math.copysign(norm_x, x[0]) if x[0] != 0.0 else -norm_x
        v = x.copy()
        v[0] -= alpha
        vnorm = np.linalg.norm(v)
        if vnorm == 0.0:
            continue
        v /= vnorm
        sub = a[k + 1:, k + 1:]
        w = sub @ v
        w2 = w - (v @ w) * v
        sub -= 2.0 * np.outer(v, w2) + 2.0 * np.outer(w2, v)
        a[k + 1:, k] = 0.0
        a[k, k + 1:] = 0.0
        a[k + 1, k] = a[k, k + 1] = alpha
        q[:, k + 1:] -= 2.0 * np.outer(q[:, k + 1:] @ v, v)
    d = np.diag(a).copy()
    e = np.diag(a, -1).copy()
    return d, e, q


def _tql2(d, e, z, max_iter):
    """Implicit-shift QL on a symmetric tridiagonal; rotations accumulate
    into the columns of z.  d is overwritten with eigenvalues."""
    n = d.size
    e = np.append(e, 0.0)
    for l in range(n):
        iterations = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= _EPS * dd:
                    break
                m += 1
            if m == l:
                break
            iterations += 1
            if iterations > max_iter:
                raise NoConvergenceError(
                    f"eigenvalue {l} did not deflate in {max_iter} sweeps")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                col = z[:, i + 1].copy()
                z[:, i + 1] = s * z[:, i] + c * col
                z[:, i] = c * z[:, i] - s * col
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return d, z


def sym_eig(a, max_iter=64):
    """Eigendecomposition of a symmetric matrix.

    Returns (values, vectors) with values ascending and vectors orthonormal
    in the columns.  Raises NoConvergenceError if any eigenvalue fails to
    deflate within ``max_iter`` QL sweeps.
    """
    a = check_symmetric(a)
    n = a.shape[0]
    if n == 1:
        return a[0, :1].copy(), np.ones((1, 1))
    sym = 0.5 * (a + a.T)
    d, e, q = _tridiagonalize(sym)
    d, z = _tql2(d, e, q, max_iter)
    order = np.argsort(d, kind="stable")
    return d[order], z[:, order]


def eig_generalized(a, m, max_iter=64):
    """Solve a x = lam m x for symmetric a and SPD m.

    Reduces by congruence with the Cholesky factor of m; returned vectors
    are m-orthonormal columns.
    """
    a = check_symmetric(a)
    m = check_symmetric(m)
    low = cholesky(m)
    # b = low^-1 a low^-T, symmetric
    b = solve_lower(low, solve_lower(low, a).T)
    values, y = sym_eig(0.5 * (b + b.T), max_iter=max_iter)
    vectors = solve_lower_t(low, y)
    return values, vectors
