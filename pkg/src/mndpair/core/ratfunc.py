"""Rational functions with a factored denominator.

The denominator is kept as a product of normalized factors with
multiplicities.  A factor is normalized when it is not a constant, has no
monomial content (single variables are factors of their own), and has
leading coefficient 1 in the packed-key lex order.  Every integrand in this
package has a denominator made of linear forms, so this representation keeps
denominators small without multivariate gcd computations.

Cancellation removes single-variable factors against the numerator's
monomial content and, in :meth:`RatFunc.canonical`, divides out any other
factor that divides the numerator exactly.  Equality is decided by
cross-multiplication, which is correct regardless of how far cancellation
went.
"""

from __future__ import annotations

from typing import Iterable

from .poly import FIELD, MultiPoly, PolyRing
from .rational import ONE, to_q

Factor = tuple[MultiPoly, int]


def _single_var(f: MultiPoly) -> int | None:
    """Index i if f == Y_i, else None."""
    if len(f.terms) != 1:
        return None
    (key, c), = f.terms.items()
    if c != 1 or key & (key - 1):
        return None
    return key.bit_length() // FIELD if key else None


def normalize_factor(p: MultiPoly) -> tuple[object, list[Factor]]:
    """Write p = c * prod f_i^{e_i} with normalized factors f_i."""
    if p.is_zero():
        raise ZeroDivisionError("zero factor in a denominator")
    ring = p.ring
    for shift, _ in ring._capspec:
        if any((k >> shift) & ((1 << FIELD) - 1) for k in p.terms):
            raise ValueError("denominator factors may not involve jet parameters")
    content = p.monomial_content()
    out: list[Factor] = []
    for i, e in enumerate(content):
        if e:
            out.append((ring.var(i), e))
    rest = p.shift_monomial(content, -1) if any(content) else p
    if rest.is_constant():
        return rest.constant_term(), out
    lc, monic = rest.monic()
    out.append((monic, 1))
    return lc, out


def _merge(factors: Iterable[Factor]) -> tuple[Factor, ...]:
    acc: dict[MultiPoly, int] = {}
    for f, k in factors:
        if k:
            acc[f] = acc.get(f, 0) + k
    return tuple(sorted(((f, k) for f, k in acc.items() if k), key=lambda t: t[0].key()))


class RatFunc:
    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: tuple[Factor, ...] = ()):
        self.num = num
        self.den = den

    # construction -----------------------------------------------------------
    @classmethod
    def poly(cls, p: MultiPoly) -> RatFunc:
        return cls(p, ())

    @classmethod
    def build(cls, num: MultiPoly, factors: Iterable[tuple[MultiPoly, int]] = (), full: bool = True) -> RatFunc:
        """num / prod F^k for arbitrary non-zero polynomials F, normalized and cancelled."""
        scale = ONE
        normed: list[Factor] = []
        for F, k in factors:
            if k < 0:
                raise ValueError("negative multiplicity")
            c, fs = normalize_factor(F)
            scale = scale * c ** k
            normed.extend((f, e * k) for f, e in fs)
        rf = cls(num * (ONE / scale) if scale != 1 else num, _merge(normed))
        return rf.cancel(full)

    @property
    def ring(self) -> PolyRing:
        return self.num.ring

    def denominator(self) -> MultiPoly:
        out = self.num.ring.one()
        for f, k in self.den:
            out = out * f ** k
        return out

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return not self.den

    def cancel(self, full: bool = True) -> RatFunc:
        num = self.num
        if num.is_zero():
            return RatFunc(num, ())
        out: list[Factor] = []
        for f, k in self.den:
            i = _single_var(f)
            if i is not None:
                c = min(k, num.min_degree_in(i))
                if c:
                    e = [0] * num.ring.nvars
                    e[i] = c
                    num = num.shift_monomial(e, -1)
                    k -= c
            elif full:
                while k:
                    q = num.exact_div(f)
                    if q is None:
                        break
                    num = q
                    k -= 1
            if k:
                out.append((f, k))
        return RatFunc(num, tuple(out))

    def canonical(self) -> RatFunc:
        return self.cancel(True)

    def key(self) -> tuple:
        return (self.num.key(), tuple((f.key(), k) for f, k in self.den))

    def den_key(self) -> tuple:
        return tuple((f.key(), k) for f, k in self.den)

    # arithmetic -------------------------------------------------------------
    def _coerce(self, other) -> RatFunc:
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, MultiPoly):
            return RatFunc(other, ())
        return RatFunc(self.num.ring.const(other), ())

    def _common(self, other: RatFunc) -> tuple[MultiPoly, MultiPoly, tuple[Factor, ...]]:
        mine = dict(self.den)
        theirs = dict(other.den)
        a = self.num
        b = other.num
        joint = []
        for f in set(mine) | set(theirs):
            ka = mine.get(f, 0)
            kb = theirs.get(f, 0)
            k = max(ka, kb)
            joint.append((f, k))
            if k > ka:
                a = a * f ** (k - ka)
            if k > kb:
                b = b * f ** (k - kb)
        return a, b, _merge(joint)

    def __add__(self, other) -> RatFunc:
        other = self._coerce(other)
        a, b, den = self._common(other)
        return RatFunc(a + b, den).cancel()

    __radd__ = __add__

    def __neg__(self) -> RatFunc:
        return RatFunc(-self.num, self.den)

    def __sub__(self, other) -> RatFunc:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> RatFunc:
        return (-self) + other

    def __mul__(self, other) -> RatFunc:
        if not isinstance(other, (RatFunc, MultiPoly)):
            return RatFunc(self.num * to_q(other), self.den)
        other = self._coerce(other)
        return RatFunc(self.num * other.num, _merge(self.den + other.den)).cancel()

    __rmul__ = __mul__

    def __truediv__(self, other) -> RatFunc:
        if not isinstance(other, (RatFunc, MultiPoly)):
            c = to_q(other)
            if not c:
                raise ZeroDivisionError("division by zero")
            return RatFunc(self.num * (ONE / c), self.den)
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        top = self.num
        for f, k in other.den:
            top = top * f ** k
        return RatFunc.build(top, [(other.num, 1)] + list(self.den))

    def __pow__(self, e: int) -> RatFunc:
        if e < 0:
            if self.is_zero():
                raise ZeroDivisionError("zero to a negative power")
            return RatFunc.build(self.denominator(), [(self.num, 1)]) ** (-e)
        return RatFunc(self.num ** e, tuple((f, k * e) for f, k in self.den))

    def __eq__(self, other) -> bool:
        if not isinstance(other, (RatFunc, MultiPoly, int)):
            try:
                other = RatFunc(self.num.ring.const(other))
            except TypeError:
                return NotImplemented
        other = self._coerce(other)
        a, b, _ = self._common(other)
        return a == b

    def __hash__(self) -> int:  # equal values may hash differently unless canonical
        return hash(self.canonical().key())

    def evaluate(self, point):
        den = self.denominator().evaluate(point)
        return self.num.evaluate(point) / den

    def __str__(self) -> str:
        if not self.den:
            return str(self.num)
        parts = []
        for f, k in self.den:
            parts.append(f"({f})" + (f"^{k}" if k > 1 else ""))
        return f"({self.num}) / " + "*".join(parts)

    def __repr__(self) -> str:
        return f"RatFunc({self})"


def ratfunc_arith(op: str, a: RatFunc, b: RatFunc) -> RatFunc:
    if op == "add":
        return (a + b).canonical()
    if op == "mul":
        return (a * b).canonical()
    if op == "div":
        return (a / b).canonical()
    raise ValueError(f"unknown operation {op!r}")
