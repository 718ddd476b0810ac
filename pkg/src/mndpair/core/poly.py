"""Sparse multivariate polynomials with exact rational coefficients.

A :class:`PolyRing` names the variables and records an optional degree cap per
variable.  Capped variables are nilpotent parameters: products discard every
monomial whose exponent exceeds the cap, which realizes the truncated jet ring
in the same data structure as the ordinary residue variables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from . import kernels as K
from .rational import ONE, Q, ZERO, format_rational, to_fraction, to_q

FIELD = K.FIELD
MASK = K.MASK
MAX_EXPONENT = MASK


@dataclass(frozen=True)
class PolyRing:
    names: tuple[str, ...]
    caps: tuple[int | None, ...] = ()
    _capspec: tuple = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        caps = self.caps or (None,) * len(self.names)
        if len(caps) != len(self.names):
            raise ValueError("one cap per variable")
        object.__setattr__(self, "caps", tuple(caps))
        spec = tuple((FIELD * i, c) for i, c in enumerate(caps) if c is not None)
        object.__setattr__(self, "_capspec", spec)

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def shift(self, i: int) -> int:
        return FIELD * i

    def pack(self, exps: Iterable[int]) -> int:
        key = 0
        for i, e in enumerate(exps):
            if e < 0 or e > MAX_EXPONENT:
                raise ValueError(f"exponent {e} out of range")
            key |= e << (FIELD * i)
        return key

    def unpack(self, key: int) -> tuple[int, ...]:
        return tuple((key >> (FIELD * i)) & MASK for i in range(len(self.names)))

    def admissible(self, key: int) -> bool:
        for shift, cap in self._capspec:
            if (key >> shift) & MASK > cap:
                return False
        return True

    def zero(self) -> MultiPoly:
        return MultiPoly(self, {})

    def one(self) -> MultiPoly:
        return MultiPoly(self, {0: ONE})

    def const(self, c) -> MultiPoly:
        c = to_q(c)
        return MultiPoly(self, {0: c} if c else {})

    def var(self, i: int | str) -> MultiPoly:
        if isinstance(i, str):
            i = self.index(i)
        key = 1 << (FIELD * i)
        if not self.admissible(key):
            return self.zero()
        return MultiPoly(self, {key: ONE})

    def linear(self, coeffs: Iterable, const=0) -> MultiPoly:
        terms = {}
        if const:
            terms[0] = to_q(const)
        for i, c in enumerate(coeffs):
            if c:
                terms[1 << (FIELD * i)] = to_q(c)
        return MultiPoly(self, terms)

    def from_dict(self, d: Mapping[tuple[int, ...], object]) -> MultiPoly:
        terms: dict = {}
        for exps, c in d.items():
            if len(exps) != self.nvars:
                raise ValueError("exponent tuple has wrong length")
            key = self.pack(exps)
            if not self.admissible(key):
                continue
            c = to_q(c)
            if c:
                terms[key] = terms.get(key, ZERO) + c
        return MultiPoly(self, {k: v for k, v in terms.items() if v})


class MultiPoly:
    """Immutable sparse polynomial over the rationals in a :class:`PolyRing`."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # basic protocol -----------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_term(self):
        return self.terms.get(0, ZERO)

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)) or type(other) is Q:
            return self.terms == ({0: to_q(other)} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def key(self) -> tuple:
        """Deterministic structural key."""
        return tuple(sorted(self.terms.items()))

    def _check(self, other: MultiPoly) -> None:
        if self.ring != other.ring:
            raise ValueError("polynomials live in different rings")

    def _coerce(self, other) -> MultiPoly:
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return self.ring.const(other)

    # arithmetic ----------------------------------------------------------
    def __add__(self, other) -> MultiPoly:
        other = self._coerce(other)
        return MultiPoly(self.ring, K.add(self.terms, other.terms))

    __radd__ = __add__

    def __neg__(self) -> MultiPoly:
        return MultiPoly(self.ring, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other) -> MultiPoly:
        other = self._coerce(other)
        return MultiPoly(self.ring, K.add(self.terms, {k: -v for k, v in other.terms.items()}))

    def __rsub__(self, other) -> MultiPoly:
        return (-self) + other

    def __mul__(self, other) -> MultiPoly:
        if isinstance(other, MultiPoly):
            self._check(other)
            if self._max_exponent() + other._max_exponent() > MAX_EXPONENT:
                raise OverflowError(f"product exceeds the exponent limit {MAX_EXPONENT}")
            return MultiPoly(self.ring, K.mul(self.terms, other.terms, self.ring._capspec))
        return MultiPoly(self.ring, K.scale(self.terms, to_q(other)))

    __rmul__ = __mul__

    def __truediv__(self, c) -> MultiPoly:
        if isinstance(c, MultiPoly):
            q = self.exact_div(c)
            if q is None:
                raise ArithmeticError("polynomial division is not exact")
            return q
        c = to_q(c)
        if not c:
            raise ZeroDivisionError("division by zero")
        return MultiPoly(self.ring, K.scale(self.terms, ONE / c))

    def __pow__(self, e: int) -> MultiPoly:
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def _max_exponent(self) -> int:
        """Largest single-variable exponent; a cheap bound that keeps packed keys from carrying."""
        m = 0
        for key in self.terms:
            while key:
                e = key & MASK
                if e > m:
                    m = e
                key >>= FIELD
        return m

    def mul_capped(self, other: MultiPoly, extra: tuple) -> MultiPoly:
        """Product truncated by the ring caps plus the extra ``(var, max)`` caps."""
        caps = self.ring._capspec + tuple((FIELD * i, m) for i, m in extra)
        return MultiPoly(self.ring, K.mul(self.terms, other.terms, caps))

    def truncated(self, extra: tuple) -> MultiPoly:
        caps = tuple((FIELD * i, m) for i, m in extra)
        return MultiPoly(self.ring, K.truncate(self.terms, caps))

    def truncate_total(self, variables: Iterable[int], maxdeg: int) -> MultiPoly:
        vs = tuple(variables)
        out = {}
        for k, c in self.terms.items():
            if sum((k >> (FIELD * i)) & MASK for i in vs) <= maxdeg:
                out[k] = c
        return MultiPoly(self.ring, out)

    # structure -------------------------------------------------------------
    def degree_in(self, i: int) -> int:
        if not self.terms:
            return -1
        s = FIELD * i
        return max((k >> s) & MASK for k in self.terms)

    def min_degree_in(self, i: int) -> int:
        if not self.terms:
            return 0
        s = FIELD * i
        return min((k >> s) & MASK for k in self.terms)

    def total_degree(self, variables: Iterable[int] | None = None) -> int:
        if not self.terms:
            return -1
        vs = range(self.ring.nvars) if variables is None else tuple(variables)
        return max(sum((k >> (FIELD * i)) & MASK for i in vs) for k in self.terms)

    def depends_on(self, i: int) -> bool:
        s = FIELD * i
        return any((k >> s) & MASK for k in self.terms)

    def coeff_in(self, i: int, e: int) -> MultiPoly:
        """Coefficient of var_i^e as a polynomial not involving var_i."""
        return MultiPoly(self.ring, K.extract(self.terms, FIELD * i, e))

    def split_in(self, i: int) -> dict[int, MultiPoly]:
        return {e: MultiPoly(self.ring, d) for e, d in K.split(self.terms, FIELD * i).items()}

    def diff(self, i: int) -> MultiPoly:
        return MultiPoly(self.ring, K.deriv(self.terms, FIELD * i))

    def monomial_content(self) -> tuple[int, ...]:
        """Exponent vector of the largest monomial dividing every term."""
        if not self.terms:
            return (0,) * self.ring.nvars
        return tuple(self.min_degree_in(i) for i in range(self.ring.nvars))

    def shift_monomial(self, exps: Iterable[int], sign: int = 1) -> MultiPoly:
        off = self.ring.pack(exps)
        if sign < 0:
            off = -off
        return MultiPoly(self.ring, K.shift_key(self.terms, off))

    def leading(self) -> tuple[int, object]:
        """Leading term in the lex order given by the packed keys."""
        k = max(self.terms)
        return k, self.terms[k]

    def monic(self) -> tuple[object, MultiPoly]:
        """Return (lc, p/lc)."""
        _, lc = self.leading()
        return lc, MultiPoly(self.ring, K.scale(self.terms, ONE / lc))

    def exact_div(self, other: MultiPoly) -> MultiPoly | None:
        """Quotient if ``other`` divides ``self`` exactly, else None."""
        self._check(other)
        if not other.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self.terms:
            return self.ring.zero()
        nv = self.ring.nvars
        kb, cb = other.leading()
        eb = self.ring.unpack(kb)
        rem = dict(self.terms)
        quot: dict = {}
        neg_other = {k: -v for k, v in other.terms.items()}
        while rem:
            ka = max(rem)
            ea = self.ring.unpack(ka)
            if any(ea[i] < eb[i] for i in range(nv)):
                return None
            c = rem[ka] / cb
            off = ka - kb
            quot[off] = c
            K.axpy(rem, K.shift_key(neg_other, off), c)
        return MultiPoly(self.ring, quot)

    # substitution and evaluation -------------------------------------------
    def substitute(self, images: Mapping[int, MultiPoly]) -> MultiPoly:
        """Replace variable i by images[i] (same ring); others are kept."""
        ring = self.ring
        out = ring.zero()
        cache: dict[tuple[int, int], MultiPoly] = {}
        for key, c in self.terms.items():
            exps = ring.unpack(key)
            mono_exps = [0] * ring.nvars
            term = ring.const(c)
            for i, e in enumerate(exps):
                if not e:
                    continue
                if i in images:
                    p = cache.get((i, e))
                    if p is None:
                        p = cache[(i, e)] = images[i] ** e
                    term = term * p
                else:
                    mono_exps[i] = e
            if any(mono_exps):
                term = term.shift_monomial(mono_exps)
                term = MultiPoly(ring, K.truncate(term.terms, ring._capspec))
            out = out + term
        return out

    def evaluate(self, point: Mapping[int, object]):
        """Evaluate at a partial point; variables missing from ``point`` must not occur."""
        total = None
        for key, c in self.terms.items():
            v = c
            for i, e in enumerate(self.ring.unpack(key)):
                if e:
                    v = v * point[i] ** e
            total = v if total is None else total + v
        return ZERO if total is None else total

    def coefficients(self) -> dict[tuple[int, ...], Fraction]:
        return {self.ring.unpack(k): to_fraction(c) for k, c in self.terms.items()}

    def to_fraction_constant(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return to_fraction(self.constant_term())

    # display ----------------------------------------------------------------
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for key in sorted(self.terms, reverse=True):
            c = self.terms[key]
            mono = []
            for i, e in enumerate(self.ring.unpack(key)):
                if e == 1:
                    mono.append(self.ring.names[i])
                elif e:
                    mono.append(f"{self.ring.names[i]}^{e}")
            coeff = format_rational(c)
            if not mono:
                parts.append(coeff)
            elif c == 1:
                parts.append("*".join(mono))
            elif c == -1:
                parts.append("-" + "*".join(mono))
            else:
                parts.append(f"{coeff}*" + "*".join(mono))
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"MultiPoly({self})"


def y_ring(nvars: int, jets: Mapping[str, int] | None = None) -> PolyRing:
    """Ring with residue variables Y1..Y_nvars followed by capped jet variables."""
    names = tuple(f"Y{i + 1}" for i in range(nvars))
    caps: list[int | None] = [None] * nvars
    if jets:
        for name, cap in jets.items():
            names += (name,)
            caps.append(cap)
    return PolyRing(names, tuple(caps))
