"""Truncated polynomial ring in nilpotent parameters.

``DeltaJet`` values are polynomials in delta_3..delta_n in which every
monomial above a per-variable cap is discarded.  The residue engine carries
the same parameters as capped variables of its polynomial ring; a scalar
result of an iterated residue is converted to a ``DeltaJet`` at the end.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Iterable, Mapping

from .poly import MultiPoly, PolyRing
from .rational import to_fraction


def jet_names(n: int) -> tuple[str, ...]:
    return tuple(f"d{r}" for r in range(3, n + 1))


class DeltaJet:
    __slots__ = ("poly",)

    def __init__(self, poly: MultiPoly):
        self.poly = poly

    @classmethod
    def from_dict(cls, caps: Iterable[int], coeffs: Mapping[tuple[int, ...], object]) -> DeltaJet:
        caps = tuple(caps)
        ring = PolyRing(tuple(f"d{r + 3}" for r in range(len(caps))), caps)
        return cls(ring.from_dict(coeffs))

    @classmethod
    def constant(cls, caps: Iterable[int], c) -> DeltaJet:
        caps = tuple(caps)
        return cls.from_dict(caps, {(0,) * len(caps): c})

    @classmethod
    def generator(cls, caps: Iterable[int], i: int) -> DeltaJet:
        caps = tuple(caps)
        e = [0] * len(caps)
        e[i] = 1
        return cls.from_dict(caps, {tuple(e): 1})

    @property
    def caps(self) -> tuple[int, ...]:
        return self.poly.ring.caps

    def _other(self, other) -> MultiPoly:
        if isinstance(other, DeltaJet):
            if other.caps != self.caps:
                raise ValueError("jets with different truncation")
            return other.poly
        return self.poly.ring.const(other)

    def __add__(self, other) -> DeltaJet:
        return DeltaJet(self.poly + self._other(other))

    __radd__ = __add__

    def __sub__(self, other) -> DeltaJet:
        return DeltaJet(self.poly - self._other(other))

    def __neg__(self) -> DeltaJet:
        return DeltaJet(-self.poly)

    def __mul__(self, other) -> DeltaJet:
        return DeltaJet(self.poly * self._other(other))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> DeltaJet:
        return DeltaJet(self.poly ** e)

    def __eq__(self, other) -> bool:
        if isinstance(other, DeltaJet):
            return self.caps == other.caps and self.poly == other.poly
        return self.poly == self.poly.ring.const(other)

    def __hash__(self) -> int:
        return hash((self.caps, self.poly))

    def __repr__(self) -> str:
        return f"DeltaJet({self.poly}, caps={self.caps})"

    def coefficients(self) -> dict[tuple[int, ...], Fraction]:
        return self.poly.coefficients()

    def extract(self, multidegree: Iterable[int]) -> Fraction:
        return jet_extract(self, multidegree)


def jet_extract(j: DeltaJet, multidegree: Iterable[int]) -> Fraction:
    """Raw coefficient of prod delta_r^{n_r}; callers multiply by prod n_r! for derivatives."""
    md = tuple(multidegree)
    caps = j.caps
    if len(md) != len(caps):
        raise ValueError("multidegree length does not match the jet")
    for e, c in zip(md, caps):
        if e < 0 or e > c:
            raise ValueError(f"multidegree {md} above truncation cap {caps}")
    key = j.poly.ring.pack(md)
    return to_fraction(j.poly.terms.get(key, 0))


def derivative_factor(multidegree: Iterable[int]) -> int:
    out = 1
    for e in multidegree:
        out *= factorial(e)
    return out
