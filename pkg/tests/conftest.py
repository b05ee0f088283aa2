import random
from fractions import Fraction

import pytest

from triweight.poly import Poly2


def random_poly(rng, max_degree, span=6, max_den=6, density=0.7):
    """Random polynomial with small rational coefficients."""
    terms = {}
    for i in range(max_degree + 1):
        for j in range(max_degree + 1 - i):
            if rng.random() < density:
                num = rng.randint(-span, span)
                if num:
                    terms[(i, j)] = Fraction(num, rng.randint(1, max_den))
    if not terms:
        terms[(0, 0)] = Fraction(1)
    return Poly2(terms)


def random_params_triple(rng, lo=-1, hi=5, den=12):
    """Random rational triple strictly inside (lo, hi)^3."""
    out = []
    for _ in range(3):
        value = Fraction(rng.randint(lo * den + 1, hi * den), den)
        out.append(value)
    return tuple(out)


@pytest.fixture
def rng():
    return random.Random(20240817)
