"""Sparse bivariate polynomials with exact rational coefficients.

Terms are stored as a map from exponent pairs ``(i, j)`` (meaning
``x1**i * x2**j``) to coefficients.  Coefficients are ``Fraction`` whenever
the inputs are rational, in which case every operation below is exact;
``float`` coefficients are accepted and propagate through arithmetic in the
usual way.  Iteration order is graded lexicographic (total degree first,
then descending power of x1), which keeps downstream matrix assembly
deterministic.
"""

from __future__ import annotations

from fractions import Fraction


class NotDivisibleError(ArithmeticError):
    """Raised when exact polynomial division leaves a nonzero remainder."""


def _coerce(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, float):
        return float(c)  # normalizes numpy floats
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    num = getattr(c, "numerator", None)
    if num is not None:  # gmpy2.mpq and other exact rationals
        return Fraction(int(num), int(c.denominator))
    raise TypeError(f"unsupported coefficient type {type(c).__name__!r}")


def _grlex(exps):
    i, j = exps
    return (i + j, -i)


def _lex(exps):
    return exps  # x1 > x2


class Poly2:
    """Immutable sparse polynomial in x1, x2."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        data = {}
        if terms is not None:
            items = terms.items() if hasattr(terms, "items") else terms
            for (i, j), c in items:
                if i < 0 or j < 0:
                    raise ValueError(f"negative exponent in term ({i}, {j})")
                c = _coerce(c)
                acc = data.get((i, j))
                c = c if acc is None else acc + c
                if c == 0:
                    data.pop((i, j), None)
                else:
                    data[(i, j)] = c
        object.__setattr__(self, "_terms", data)

    # -- construction helpers ------------------------------------------------

    @classmethod
    def constant(cls, c):
        return cls({(0, 0): c})

    @classmethod
    def variable(cls, axis):
        if axis == 1:
            return cls({(1, 0): 1})
        if axis == 2:
            return cls({(0, 1): 1})
        raise ValueError("axis must be 1 or 2")

    @classmethod
    def zero(cls):
        return cls()

    # -- inspection ----------------------------------------------------------

    @property
    def is_zero(self):
        return not self._terms

    @property
    def degree(self):
        """Total degree; the zero polynomial reports -1."""
        if not self._terms:
            return -1
        return max(i + j for i, j in self._terms)

    def terms(self):
        """Yield ((i, j), coeff) in graded lexicographic order."""
        for e in sorted(self._terms, key=_grlex):
            yield e, self._terms[e]

    def coefficient(self, i, j):
        return self._terms.get((i, j), Fraction(0))

    @property
    def has_float_coefficients(self):
        return any(isinstance(c, float) for c in self._terms.values())

    # -- arithmetic ----------------------------------------------------------

    def _wrap(self, other):
        if isinstance(other, Poly2):
            return other
        return Poly2.constant(other)

    def __add__(self, other):
        other = self._wrap(other)
        data = dict(self._terms)
        for e, c in other._terms.items():
            acc = data.get(e)
            c = c if acc is None else acc + c
            if c == 0:
                data.pop(e, None)
            else:
                data[e] = c
        return Poly2(data)

    __radd__ = __add__

    def __neg__(self):
        return Poly2({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly2):
            c = _coerce(other)
            if c == 0:
                return Poly2.zero()
            return Poly2({e: v * c for e, v in self._terms.items()})
        data = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                e = (i1 + i2, j1 + j2)
                c = c1 * c2
                acc = data.get(e)
                data[e] = c if acc is None else acc + c
        return Poly2(data)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = Poly2.constant(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def diff(self, axis):
        """Exact partial derivative along axis 1 or 2."""
        if axis not in (1, 2):
            raise ValueError("axis must be 1 or 2")
        data = {}
        for (i, j), c in self._terms.items():
            if axis == 1 and i > 0:
                data[(i - 1, j)] = c * i
            elif axis == 2 and j > 0:
                data[(i, j - 1)] = c * j
        return Poly2(data)

    def __call__(self, x1, x2):
        """Evaluate at a point; exact when point and coefficients are rational."""
        total = 0
        for (i, j), c in self._terms.items():
            total = total + c * x1 ** i * x2 ** j
        return total

    def divexact(self, divisor, zero_tol=0):
        """Exact division by ``divisor``; raises NotDivisibleError otherwise.

        Single-divisor reduction in lexicographic order (x1 > x2): as soon
        as the leading remainder term is not a monomial multiple of the
        divisor's leading term the division cannot be exact.  With float
        coefficients, residual terms with |c| <= zero_tol are discarded.
        """
        if not isinstance(divisor, Poly2):
            divisor = Poly2.constant(divisor)
        if divisor.is_zero:
            raise ZeroDivisionError("division by the zero polynomial")
        lead = max(divisor._terms, key=_lex)
        lead_c = divisor._terms[lead]
        rem = dict(self._terms)
        quo = {}
        while rem:
            e = max(rem, key=_lex)
            c = rem.pop(e)
            if zero_tol and abs(c) <= zero_tol:
                continue
            if e[0] < lead[0] or e[1] < lead[1]:
                raise NotDivisibleError(
                    f"remainder term x1^{e[0]}*x2^{e[1]} not reducible")
            q = (e[0] - lead[0], e[1] - lead[1])
            qc = c / lead_c
            acc = quo.get(q)
            quo[q] = qc if acc is None else acc + qc
            for de, dc in divisor._terms.items():
                if de == lead:
                    continue
                te = (q[0] + de[0], q[1] + de[1])
                tc = rem.get(te, 0) - qc * dc
                if tc == 0:
                    rem.pop(te, None)
                else:
                    rem[te] = tc
        return Poly2(quo)

    # -- equality ------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Poly2):
            try:
                other = Poly2.constant(other)
            except TypeError:
                return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self):
        return f"Poly2({format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)


X1 = Poly2.variable(1)
X2 = Poly2.variable(2)


# -- textual format ------------------------------------------------------

def _format_coeff(c):
    if isinstance(c, Fraction):
        return str(c)
    return repr(c)


def _format_term(e, c):
    i, j = e
    parts = []
    if i:
        parts.append("x1" if i == 1 else f"x1^{i}")
    if j:
        parts.append("x2" if j == 1 else f"x2^{j}")
    if not parts:
        return _format_coeff(c)
    if c == 1:
        return "*".join(parts)
    if c == -1:
        return "-" + "*".join(parts)
    return "*".join([_format_coeff(c)] + parts)


def format_poly(p):
    """Render as a sum of ``c*x1^i*x2^j`` terms in graded-lex order."""
    if p.is_zero:
        return "0"
    out = []
    for e, c in p.terms():
        piece = _format_term(e, c)
        if not out:
            out.append(piece)
        elif piece.startswith("-"):
            out.append("- " + piece[1:])
        else:
            out.append("+ " + piece)
    return " ".join(out)


def parse_poly(text):
    """Parse the textual polynomial format produced by :func:`format_poly`.

    Accepts integer, rational ("7/3") and decimal ("0.5") coefficients;
    decimals are read exactly as rationals.
    """
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial text")
    if s == "0":
        return Poly2.zero()
    # split into signed terms
    chunks = []
    cur = ""
    for k, ch in enumerate(s):
        if ch in "+-" and k > 0 and s[k - 1] not in "+-*^/eE":
            chunks.append(cur)
            cur = ch
        else:
            cur += ch
    chunks.append(cur)
    terms = []
    for chunk in chunks:
        sign = 1
        while chunk and chunk[0] in "+-":
            if chunk[0] == "-":
                sign = -sign
            chunk = chunk[1:]
        if not chunk:
            raise ValueError(f"dangling sign in {text!r}")
        coeff = Fraction(1)
        i = j = 0
        for factor in chunk.split("*"):
            if not factor:
                raise ValueError(f"empty factor in {text!r}")
            if factor[0] == "x":
                if "^" in factor:
                    var, _, exp = factor.partition("^")
                    power = int(exp)
                else:
                    var, power = factor, 1
                if var == "x1":
                    i += power
                elif var == "x2":
                    j += power
                else:
                    raise ValueError(f"unknown variable {var!r} in {text!r}")
            else:
                coeff *= Fraction(factor)
        terms.append(((i, j), sign * coeff))
    return Poly2(terms)


def linear_form(c0, c1, c2):
    """The affine polynomial c0 + c1*x1 + c2*x2."""
    return Poly2({(0, 0): c0, (1, 0): c1, (0, 1): c2})


class MatPoly2:
    """Symmetric 2x2 matrix with Poly2 entries."""

    __slots__ = ("e11", "e12", "e22")

    def __init__(self, e11, e12, e22):
        for name, v in (("e11", e11), ("e12", e12), ("e22", e22)):
            if not isinstance(v, Poly2):
                v = Poly2.constant(v)
            object.__setattr__(self, name, v)

    @classmethod
    def from_rows(cls, rows):
        (a, b), (c, d) = rows
        b = b if isinstance(b, Poly2) else Poly2.constant(b)
        c = c if isinstance(c, Poly2) else Poly2.constant(c)
        if b != c:
            raise ValueError("matrix is not symmetric")
        return cls(a, b, d)

    def entry(self, i, j):
        """1-based symmetric access."""
        if (i, j) in ((1, 1),):
            return self.e11
        if (i, j) in ((1, 2), (2, 1)):
            return self.e12
        if (i, j) == (2, 2):
            return self.e22
        raise IndexError(f"no entry ({i}, {j})")

    def matvec(self, v):
        v1, v2 = v
        return (self.e11 * v1 + self.e12 * v2,
                self.e12 * v1 + self.e22 * v2)

    def diff(self, axis):
        return MatPoly2(self.e11.diff(axis), self.e12.diff(axis),
                        self.e22.diff(axis))

    @property
    def max_degree(self):
        return max(self.e11.degree, self.e12.degree, self.e22.degree)

    def __eq__(self, other):
        if not isinstance(other, MatPoly2):
            return NotImplemented
        return (self.e11, self.e12, self.e22) == \
            (other.e11, other.e12, other.e22)

    def __hash__(self):
        return hash((self.e11, self.e12, self.e22))

    def __repr__(self):
        return (f"MatPoly2([{format_poly(self.e11)}], "
                f"[{format_poly(self.e12)}], [{format_poly(self.e22)}])")
