"""Exact rational arithmetic backend.

gmpy2's mpq is used for the hot orthogonalization/assembly loops when it is
installed; fractions.Fraction is the drop-in fallback.  Both types expose
``numerator``/``denominator``, which is all the callers rely on.
"""

from fractions import Fraction

try:
    from gmpy2 import mpq as QQ
except ImportError:  # pragma: no cover - exercised only without gmpy2
    QQ = Fraction


def to_fraction(value):
    """Convert an exact rational (mpq, Fraction, int) to Fraction."""
    if isinstance(value, Fraction):
        return value
    return Fraction(int(value.numerator), int(value.denominator)) \
        if not isinstance(value, int) else Fraction(value)
