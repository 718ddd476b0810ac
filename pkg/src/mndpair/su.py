"""Type A root data in residue coordinates.

Coordinates: X = (X_1..X_n) with sum X_i = 0, and Y_j = X_j - X_{j+1} for
j = 1..n-1.  Inverting, X_i = sum_{j>=i} Y_j - (1/n) sum_j j*Y_j.  Points of
the Cartan subalgebra are stored by their coefficients in the simple-root
basis; the inner product is the Euclidean one on the X chart, so
<e_j, X> = Y_j and sum_j gamma_j e_j pairs with X to sum_j gamma_j Y_j.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import gcd
from typing import Iterable, Sequence

from .core.poly import MultiPoly, PolyRing, y_ring
from .core.rational import frac_part


def n_plus(n: int) -> int:
    return n * (n - 1) // 2


@dataclass(frozen=True)
class TorusPoint:
    """v = sum_j coeffs[j] * e_{j+1} in the Cartan subalgebra."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @property
    def n(self) -> int:
        return len(self.coeffs) + 1

    def vector(self) -> tuple[Fraction, ...]:
        g = (Fraction(0),) + self.coeffs + (Fraction(0),)
        return tuple(g[i + 1] - g[i] for i in range(self.n))

    @classmethod
    def from_vector(cls, v: Sequence) -> TorusPoint:
        v = [Fraction(x) for x in v]
        if sum(v) != 0:
            raise ValueError("vector is not trace-free")
        out, s = [], Fraction(0)
        for x in v[:-1]:
            s += x
            out.append(s)
        return cls(tuple(out))

    def __add__(self, other: TorusPoint) -> TorusPoint:
        return TorusPoint(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> TorusPoint:
        return TorusPoint(tuple(-a for a in self.coeffs))

    def pair_y(self) -> tuple[Fraction, ...]:
        """Coefficients of the linear form X -> <v, X> in the Y variables."""
        return self.coeffs

    def weight_coords(self) -> tuple[Fraction, ...]:
        """l_j = <v, e_j>; integral exactly on the weight lattice."""
        n = self.n
        g = self.coeffs
        out = []
        for j in range(n - 1):
            s = 2 * g[j]
            if j > 0:
                s -= g[j - 1]
            if j < n - 2:
                s -= g[j + 1]
            out.append(s)
        return tuple(out)


def bracket(v: TorusPoint) -> TorusPoint:
    """Translate by the integer lattice into the box 0 <= coeff < 1."""
    return TorusPoint(tuple(frac_part(c) for c in v.coeffs))


def weight(l: Iterable) -> TorusPoint:
    """The weight sum_j l_j * w_j given fundamental-weight coordinates."""
    l = [Fraction(x) for x in l]
    n = len(l) + 1
    # w_j has simple-root coefficients (G^{-1})_{ij} = min(i,j)(n - max(i,j))/n
    coeffs = []
    for i in range(1, n):
        coeffs.append(sum(Fraction(min(i, j) * (n - max(i, j)), n) * l[j - 1] for j in range(1, n)))
    return TorusPoint(tuple(coeffs))


def tilde_c(n: int, d: int) -> TorusPoint:
    if n < 2:
        raise ValueError("n must be at least 2")
    if gcd(n, d) != 1:
        raise ValueError(f"gcd({n}, {d}) != 1")
    v = [Fraction(d, n)] * (n - 1) + [Fraction(-(n - 1) * d, n)]
    return bracket(TorusPoint.from_vector(v))


@dataclass(frozen=True)
class WeylElement:
    """Coordinate permutation sending X-coordinate i to position perm[i] (0-based)."""

    perm: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.perm)

    def act_vector(self, v: Sequence) -> tuple:
        out = [None] * len(v)
        for i, p in enumerate(self.perm):
            out[p] = v[i]
        return tuple(out)

    def act(self, v: TorusPoint) -> TorusPoint:
        return TorusPoint.from_vector(self.act_vector(v.vector()))

    def inverse(self) -> WeylElement:
        inv = [0] * len(self.perm)
        for i, p in enumerate(self.perm):
            inv[p] = i
        return WeylElement(tuple(inv))

    def sign(self) -> int:
        s, seen = 1, [False] * self.n
        for i in range(self.n):
            if seen[i]:
                continue
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = self.perm[j]
                length += 1
            if length % 2 == 0:
                s = -s
        return s

    def is_identity(self) -> bool:
        return all(i == p for i, p in enumerate(self.perm))

    def __str__(self) -> str:
        return "(" + " ".join(str(p + 1) for p in self.perm) + ")"


def weyl_W_n_minus_1(n: int) -> list[WeylElement]:
    """Permutations of the first n-1 coordinates, identity first."""
    if n < 1:
        raise ValueError("n must be positive")
    return [WeylElement(tuple(p) + (n - 1,)) for p in permutations(range(n - 1))] if n > 1 else [WeylElement((0,))]


def weyl_full(n: int) -> list[WeylElement]:
    return [WeylElement(tuple(p)) for p in permutations(range(n))]


def difference_form(n: int, a: int, b: int) -> tuple[Fraction, ...]:
    """Y-coefficients of X_a - X_b (0-based indices)."""
    out = [Fraction(0)] * (n - 1)
    lo, hi, s = (a, b, 1) if a < b else (b, a, -1)
    for j in range(lo, hi):
        out[j] = Fraction(s)
    return tuple(out)


@dataclass(frozen=True)
class RootSystem:
    n: int

    @property
    def rank(self) -> int:
        return self.n - 1

    @property
    def simple_roots(self) -> tuple[tuple[Fraction, ...], ...]:
        out = []
        for j in range(self.n - 1):
            v = [Fraction(0)] * self.n
            v[j], v[j + 1] = Fraction(1), Fraction(-1)
            out.append(tuple(v))
        return tuple(out)

    @property
    def fundamental_weights(self) -> tuple[tuple[Fraction, ...], ...]:
        n = self.n
        return tuple(
            tuple(Fraction(1 if i <= j else 0) - Fraction(j + 1, n) for i in range(n)) for j in range(n - 1)
        )

    @property
    def positive_roots(self) -> tuple[tuple[int, int], ...]:
        """Index pairs (j, k), 1-based, j < k, for X_j - X_k."""
        return tuple((j, k) for j in range(1, self.n + 1) for k in range(j + 1, self.n + 1))

    def root_form(self, j: int, k: int) -> tuple[Fraction, ...]:
        return difference_form(self.n, j - 1, k - 1)

    def root_forms(self) -> list[tuple[Fraction, ...]]:
        return [self.root_form(j, k) for j, k in self.positive_roots]

    def gram(self) -> list[list[Fraction]]:
        r = self.rank
        return [[Fraction(2 if a == b else (-1 if abs(a - b) == 1 else 0)) for b in range(r)] for a in range(r)]

    def gram_inverse(self) -> list[list[Fraction]]:
        n, r = self.n, self.rank
        return [[Fraction(min(a, b) * (n - max(a, b)), n) for b in range(1, r + 1)] for a in range(1, r + 1)]

    def x_forms(self) -> list[tuple[Fraction, ...]]:
        """Y-coefficients of X_1..X_n."""
        n = self.n
        out = []
        for i in range(1, n + 1):
            out.append(tuple(Fraction(1 if j >= i else 0) - Fraction(j, n) for j in range(1, n)))
        return out


@lru_cache(maxsize=None)
def root_system(n: int) -> RootSystem:
    if n < 2:
        raise ValueError("n must be at least 2")
    return RootSystem(n)


def _ring_for(n: int, ring: PolyRing | None) -> PolyRing:
    ring = ring or y_ring(n - 1)
    if ring.nvars < n - 1:
        raise ValueError("ring has too few variables")
    return ring


def x_polys(n: int, ring: PolyRing | None = None) -> list[MultiPoly]:
    ring = _ring_for(n, ring)
    return [ring.linear(f) for f in root_system(n).x_forms()]


@lru_cache(maxsize=None)
def _tau_cached(n: int, ring: PolyRing) -> tuple[MultiPoly, ...]:
    e = [ring.one()] + [ring.zero()] * n
    for x in x_polys(n, ring):
        for r in range(n, 0, -1):
            e[r] = e[r] + x * e[r - 1]
    return tuple(e)


def tau_poly(n: int, r: int, ring: PolyRing | None = None) -> MultiPoly:
    """Elementary symmetric polynomial of degree r in X, written in Y."""
    if not 2 <= r <= n:
        raise ValueError(f"tau_{r} undefined for n={n}")
    return _tau_cached(n, _ring_for(n, ring))[r]


def varpi_poly(n: int, ring: PolyRing | None = None) -> MultiPoly:
    ring = _ring_for(n, ring)
    out = ring.one()
    for f in root_system(n).root_forms():
        out = out * ring.linear(f)
    return out


def root_polys(n: int, ring: PolyRing | None = None) -> list[MultiPoly]:
    ring = _ring_for(n, ring)
    return [ring.linear(f) for f in root_system(n).root_forms()]


def weyl_substitution(w: WeylElement, ring: PolyRing) -> dict[int, MultiPoly]:
    """Images of Y_j under f(X) -> f(w^{-1} X)."""
    n = w.n
    # (w^{-1} X)_i = X_{perm[i]}
    return {j: ring.linear(difference_form(n, w.perm[j], w.perm[j + 1])) for j in range(n - 1)}


def weyl_act_poly(w: WeylElement, p: MultiPoly) -> MultiPoly:
    if w.is_identity():
        return p
    return p.substitute(weyl_substitution(w, p.ring))


def directional(p: MultiPoly, v: Sequence, n: int) -> MultiPoly:
    """Derivative of p along sum_a v[a] e_a: sum_j (G v)_j dp/dY_j."""
    G = root_system(n).gram()
    out = p.ring.zero()
    for j in range(n - 1):
        c = sum(G[j][a] * v[a] for a in range(n - 1))
        if c:
            out = out + p.diff(j) * c
    return out


def simple_directional(p: MultiPoly, a: int, n: int) -> MultiPoly:
    v = [0] * (n - 1)
    v[a] = 1
    return directional(p, v, n)


def central_phase(n: int, d: int, lam: TorusPoint | Sequence[int]) -> Fraction:
    """Angle a in [0,1) with c^{-lambda} = exp(2 pi i a)."""
    if isinstance(lam, TorusPoint):
        l = lam.weight_coords()
    else:
        l = tuple(Fraction(x) for x in lam)
    if len(l) != n - 1:
        raise ValueError("weight has the wrong rank")
    if any(x.denominator != 1 for x in l):
        raise ValueError("not a point of the weight lattice")
    c = tilde_c(n, d).coeffs
    return frac_part(-sum(ci * li for ci, li in zip(c, l)))
