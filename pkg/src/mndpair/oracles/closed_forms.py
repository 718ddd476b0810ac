"""Rank-2 closed forms from Bernoulli numbers.

Values that formally involve pi are carried as ``PiMultiple(coeff, exp)``
meaning coeff * pi^exp, so that the cancellation of pi is checked exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from ..core.rational import bernoulli


@dataclass(frozen=True)
class PiMultiple:
    coeff: Fraction
    exp: int

    def __mul__(self, other: PiMultiple) -> PiMultiple:
        return PiMultiple(self.coeff * other.coeff, self.exp + other.exp)

    def rational(self) -> Fraction:
        if self.coeff and self.exp:
            raise ArithmeticError(f"value carries pi^{self.exp}")
        return self.coeff


def zeta_even(s: int) -> PiMultiple:
    """zeta(s) for even s >= 2, and the value -1/2 at s = 0."""
    if s < 0 or s % 2:
        raise ValueError("only even non-negative arguments")
    if s == 0:
        return PiMultiple(Fraction(-1, 2), 0)
    k = s // 2
    c = Fraction((-1) ** (k + 1) * 2 ** (s - 1)) * bernoulli(s) / factorial(s)
    return PiMultiple(c, s)


def eta_even(s: int) -> PiMultiple:
    """Dirichlet eta (1 - 2^{1-s}) zeta(s); eta(0) = 1/2 is the Abel-summed value."""
    z = zeta_even(s)
    return PiMultiple((1 - Fraction(2) ** (1 - s)) * z.coeff, z.exp)


@dataclass(frozen=True)
class ClosedFormValue:
    value: Fraction
    pi_exponent: int
    regularized: bool


def thaddeus_value(g: int, j: int, regularize: bool = False) -> ClosedFormValue:
    """2^{2g}/(2 (8 pi^2)^{g-1}) * pi^{2j} * eta(2g - 2 - 2j): the a_2^j pairing with exp f_2."""
    if g < 2:
        raise ValueError("genus must be at least 2")
    if j < 0 or j > g - 1:
        raise ValueError(f"j={j} outside 0..{g - 1}")
    if j == g - 1 and not regularize:
        raise ValueError("j = g-1 needs the regularized eta(0); pass regularize=True")
    s = 2 * g - 2 - 2 * j
    pref = PiMultiple(Fraction(2 ** (2 * g), 2 * 8 ** (g - 1)), -2 * (g - 1))
    total = pref * PiMultiple(Fraction(1), 2 * j) * eta_even(s)
    if total.exp != 0:
        raise ArithmeticError("pi powers failed to cancel")
    return ClosedFormValue(total.coeff, total.exp, j == g - 1)


def svol_value(g: int) -> Fraction:
    """(2^{g-1} - 2^{2-g}) |B_{2g-2}| / (2g-2)!."""
    if g < 2:
        raise ValueError("genus must be at least 2")
    return (Fraction(2) ** (g - 1) - Fraction(2) ** (2 - g)) * abs(bernoulli(2 * g - 2)) / factorial(2 * g - 2)
