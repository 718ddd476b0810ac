"""Exact rational scalars.

Internally every coefficient is an ``mpq`` from gmpy2 when that package is
importable, otherwise a :class:`fractions.Fraction`.  The two types compare
and hash identically, so dictionary keys built from either interoperate.
Public results are always converted back to ``Fraction``.
"""

from __future__ import annotations

import os
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

try:  # pragma: no cover - exercised implicitly
    if os.environ.get("MNDPAIR_NO_GMPY"):
        raise ImportError
    from gmpy2 import mpq as _mpq

    Q = _mpq
    SCALAR_BACKEND = "gmpy2"
except ImportError:  # pragma: no cover
    Q = Fraction
    SCALAR_BACKEND = "fractions"

ZERO = Q(0)
ONE = Q(1)


def to_q(x) -> object:
    """Coerce ints, Fractions, strings or mpq values into the internal scalar."""
    if isinstance(x, str):
        return Q(parse_rational(x))
    if isinstance(x, Fraction):
        return Q(x.numerator, x.denominator)
    return Q(x)


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(int(x.numerator), int(x.denominator))


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or a finite decimal into a Fraction.

    Raises ValueError on malformed input or a zero denominator.
    """
    s = text.strip()
    if not s:
        raise ValueError("empty rational")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc


def format_rational(x) -> str:
    f = to_fraction(x)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def frac_part(x) -> Fraction:
    """Fractional part in [0, 1)."""
    f = to_fraction(x)
    return f - (f.numerator // f.denominator)


@lru_cache(maxsize=None)
def _bernoulli_table(m: int) -> tuple[Fraction, ...]:
    # Recurrence sum_{j<=k} C(k+1, j) B_j = 0 for k >= 1.
    table = [Fraction(1)]
    for k in range(1, m + 1):
        s = sum(comb(k + 1, j) * table[j] for j in range(k))
        table.append(-s / (k + 1))
    return tuple(table)


def bernoulli(m: int) -> Fraction:
    """B_m with t/(e^t - 1) = sum B_m t^m / m!, so B_1 = -1/2."""
    if m < 0:
        raise ValueError("bernoulli index must be non-negative")
    if m >= 3 and m % 2 == 1:
        return Fraction(0)
    return _bernoulli_table(m)[m]


def bernoulli_series(order: int, scale=1) -> list:
    """Coefficients of (scale*t)/(e^(scale*t) - 1) up to t^order, as scalars."""
    c = to_q(scale)
    out = []
    p = ONE
    for k in range(order + 1):
        out.append(Q(bernoulli(k)) * p / factorial(k))
        p = p * c
    return out


def exp_series(order: int, scale=1) -> list:
    """Coefficients of e^(scale*t) up to t^order."""
    c = to_q(scale)
    out = []
    p = ONE
    for k in range(order + 1):
        out.append(p / factorial(k))
        p = p * c
    return out
