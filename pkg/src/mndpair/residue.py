"""Expressions closed under one-variable residues, and the iterated residue.

A term is exp(sum lam_j Y_j) * R(Y) * prod_j (e^{c_j Y_j} - 1)^{-m_j} with R a
rational function whose denominator is a product of normalized factors.
Residues are taken innermost first: Y_{n-1}, then Y_{n-2}, ..., then Y_1,
with the outer variables held generic.

Expanding a term in ``v`` about 0: write the denominator as
v^p * prod f^k * (factors free of v).  With f0 = f|_{v=0} and u = f - f0,

    f^{-k} = f0^{-k-K} * sum_{j<=K} C(-k, j) u^j f0^{K-j}    (mod v^{K+1})

so every coefficient up to v^K shares the denominator prod f0^{k+K}.  The
exponential and the Euler factors are univariate in v and expand with exp
and Bernoulli coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

from .core.jet import DeltaJet
from .core.poly import FIELD, MultiPoly, PolyRing
from .core.rational import ONE, ZERO, bernoulli_series, exp_series, format_rational, to_fraction, to_q
from .core.ratfunc import RatFunc, _merge, _single_var, normalize_factor
from .parallel import map_ordered

Euler = tuple[tuple[object, int], ...]
NO_EULER = (ONE, 0)


class ResidueError(ArithmeticError):
    pass


@dataclass(frozen=True)
class ExpTerm:
    lam: tuple
    euler: Euler
    rat: RatFunc

    def structure_key(self) -> tuple:
        return (self.lam, self.euler, self.rat.den_key())

    def pole_order(self, var: int) -> int:
        p = 0
        for f, k in self.rat.den:
            if _single_var(f) == var:
                p += k
        return p + self.euler[var][1]


def make_term(ring: PolyRing, nres: int, rat: RatFunc | MultiPoly, lam: Sequence = (), euler: Iterable | None = None) -> ExpTerm:
    """Convenience constructor; ``euler`` lists (scale, multiplicity) per residue variable."""
    if isinstance(rat, MultiPoly):
        rat = RatFunc.poly(rat)
    lam = tuple(to_q(x) for x in lam) if lam else (ZERO,) * nres
    if euler is None:
        eu: Euler = (NO_EULER,) * nres
    else:
        eu = tuple((to_q(c), int(m)) if m else NO_EULER for c, m in euler)
    if len(lam) != nres or len(eu) != nres:
        raise ValueError("lam and euler need one entry per residue variable")
    for c, m in eu:
        if m and not c:
            raise ValueError("euler scale must be non-zero")
    return ExpTerm(lam, eu, rat)


class Expression:
    """Finite sum of ExpTerms in the residue variables 0..nlive-1 of ``ring``."""

    __slots__ = ("ring", "nres", "nlive", "terms")

    def __init__(self, ring: PolyRing, nres: int, terms: Iterable[ExpTerm] = (), nlive: int | None = None):
        self.ring = ring
        self.nres = nres
        self.nlive = nres if nlive is None else nlive
        self.terms = _merge_terms(terms)

    @classmethod
    def single(cls, ring: PolyRing, nres: int, rat, lam: Sequence = (), euler=None) -> Expression:
        return cls(ring, nres, [make_term(ring, nres, rat, lam, euler)])

    def __add__(self, other: Expression) -> Expression:
        self._compatible(other)
        return Expression(self.ring, self.nres, self.terms + other.terms, self.nlive)

    def __neg__(self) -> Expression:
        return self.scaled(-1)

    def __sub__(self, other: Expression) -> Expression:
        return self + (-other)

    def scaled(self, c) -> Expression:
        c = to_q(c)
        return Expression(self.ring, self.nres, [ExpTerm(t.lam, t.euler, t.rat * c) for t in self.terms], self.nlive)

    def times_poly(self, p: MultiPoly) -> Expression:
        return Expression(self.ring, self.nres, [ExpTerm(t.lam, t.euler, t.rat * p) for t in self.terms], self.nlive)

    def _compatible(self, other: Expression) -> None:
        if (self.ring, self.nres, self.nlive) != (other.ring, other.nres, other.nlive):
            raise ValueError("incompatible expressions")

    def is_zero(self) -> bool:
        return not self.terms

    def dump(self) -> str:
        """Deterministic text form, one term per line."""
        lines = []
        for t in self.terms:
            lam = ",".join(format_rational(x) for x in t.lam)
            eu = ",".join(f"{format_rational(c)}^{m}" if m else "-" for c, m in t.euler)
            lines.append(f"exp[{lam}] euler[{eu}] {t.rat}")
        return "\n".join(sorted(lines))

    def __repr__(self) -> str:
        return f"Expression({len(self.terms)} terms, live={self.nlive})"


def _merge_terms(terms: Iterable[ExpTerm]) -> list[ExpTerm]:
    acc: dict = {}
    for t in terms:
        if t.rat.is_zero():
            continue
        key = t.structure_key()
        prev = acc.get(key)
        if prev is None:
            acc[key] = t
        else:
            num = prev.rat.num + t.rat.num
            acc[key] = ExpTerm(t.lam, t.euler, RatFunc(num, t.rat.den))
    out = []
    for key in sorted(acc, key=_sort_key):
        t = acc[key]
        if t.rat.is_zero():
            continue
        out.append(ExpTerm(t.lam, t.euler, t.rat.cancel(False)))
    return out


def _sort_key(key: tuple) -> tuple:
    lam, euler, den = key
    return (tuple(to_fraction(x) for x in lam), tuple((to_fraction(c), m) for c, m in euler), den)


@dataclass(frozen=True)
class LaurentSeries:
    """sum_{e >= lowest} coeffs[e - lowest] * v^e, times exp/euler data in the other variables."""

    var: int
    lowest: int
    coeffs: tuple[RatFunc, ...]
    lam_rest: tuple
    euler_rest: Euler

    @property
    def order(self) -> int:
        return self.lowest + len(self.coeffs) - 1

    def coefficient(self, e: int) -> RatFunc | None:
        i = e - self.lowest
        if i < 0:
            return None
        if i >= len(self.coeffs):
            raise ValueError("coefficient beyond the truncation order")
        return self.coeffs[i]

    def is_zero(self) -> bool:
        return not self.coeffs


def _univariate(ring: PolyRing, var: int, coeffs: Sequence) -> MultiPoly:
    s = FIELD * var
    return MultiPoly(ring, {i << s: c for i, c in enumerate(coeffs) if c})


def _bracket_series(term: ExpTerm, var: int, K: int) -> tuple[MultiPoly, object, list]:
    """Regular part of the term in ``var`` up to var^K.

    Returns (S, scalar, new_factors) where the Laurent coefficient of
    var^{e} equals scalar * S_{e+P} / (rest * prod new_factors).
    """
    ring = term.rat.num.ring
    cap = ((var, K),)
    lam_v = term.lam[var]
    c, m = term.euler[var]
    uni = exp_series(K, lam_v) if lam_v else [ONE]
    if m:
        bern = bernoulli_series(K, c)
        for _ in range(m):
            uni = _mul_uni(uni, bern, K)
    S = _univariate(ring, var, uni)
    scalar = ONE / c ** m if m else ONE
    new_factors: list = []
    for f, k in term.rat.den:
        if _single_var(f) == var or not f.depends_on(var):
            continue
        f0 = f.coeff_in(var, 0)
        if f0.is_zero():
            raise ResidueError("denominator factor vanishes identically at the expansion point")
        u = f - f0
        expansion = ring.zero()
        upow = ring.one()
        for j in range(K + 1):
            if j:
                upow = upow.mul_capped(u, cap)
                if upow.is_zero():
                    break
            expansion = expansion + upow.mul_capped(f0 ** (K - j), cap) * _binom_neg(k, j)
        S = S.mul_capped(expansion, cap)
        new_factors.append((f0, k + K))
    num = term.rat.num
    if num.degree_in(var) > K:
        num = num.truncated(cap)
    S = S.mul_capped(num, cap)
    return S, scalar, new_factors


def _binom_neg(k: int, j: int) -> int:
    """C(-k, j) = (-1)^j C(k+j-1, j)."""
    return (-1) ** j * comb(k + j - 1, j)


def _mul_uni(a: list, b: list, K: int) -> list:
    out = [ZERO] * (K + 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j in range(K + 1 - i):
            if j < len(b) and b[j]:
                out[i + j] += x * b[j]
    return out


def _rest_data(term: ExpTerm, var: int) -> tuple[tuple, Euler, list]:
    lam = term.lam[:var] + (ZERO,) + term.lam[var + 1:]
    eu = term.euler[:var] + (NO_EULER,) + term.euler[var + 1:]
    rest = [(f, k) for f, k in term.rat.den if not f.depends_on(var)]
    return lam, eu, rest


def _assemble(num: MultiPoly, scalar, rest: list, new_factors: list) -> RatFunc:
    const = ONE
    normed = list(rest)
    for f0, k in new_factors:
        c, fs = normalize_factor(f0)
        const = const * c ** k
        normed.extend((f, e * k) for f, e in fs)
    factor = scalar / const
    if factor != 1:
        num = num * factor
    return RatFunc(num, _merge(normed)).cancel(False)


def expand_in(term: ExpTerm, var: int, order: int) -> LaurentSeries:
    """Laurent expansion of ``term`` in ``var`` about 0, through var^order."""
    P = term.pole_order(var)
    lam, eu, rest = _rest_data(term, var)
    K = order + P
    if K < 0:
        return LaurentSeries(var, order + 1, (), lam, eu)
    S, scalar, new_factors = _bracket_series(term, var, K)
    coeffs = []
    for i in range(K + 1):
        coeffs.append(_assemble(S.coeff_in(var, i), scalar, rest, new_factors))
    lowest = -P
    while coeffs and coeffs[0].is_zero():
        coeffs.pop(0)
        lowest += 1
    return LaurentSeries(var, lowest, tuple(coeffs), lam, eu)


def _residue_term(term: ExpTerm, var: int, extra: int) -> ExpTerm | None:
    P = term.pole_order(var)
    if P <= 0:
        return None
    K = P - 1 + extra
    S, scalar, new_factors = _bracket_series(term, var, K)
    lam, eu, rest = _rest_data(term, var)
    rat = _assemble(S.coeff_in(var, P - 1), scalar, rest, new_factors)
    if rat.is_zero():
        return None
    return ExpTerm(lam, eu, rat)


def residue_single(expr: Expression, var: int | None = None, extra_order: int = 0) -> Expression:
    """Coefficient of var^{-1}; ``var`` must be the innermost live variable.

    ``extra_order`` expands further than necessary; the result must not change.
    """
    if expr.nlive == 0:
        raise ResidueError("no live variables left")
    inner = expr.nlive - 1
    if var is None:
        var = inner
    if var != inner:
        raise ResidueError(f"residues are taken innermost first; expected Y{inner + 1}")
    results = map_ordered(lambda t: _residue_term(t, var, extra_order), expr.terms)
    return Expression(expr.ring, expr.nres, [r for r in results if r is not None], inner)


def res_plus(expr: Expression, var: int | None = None) -> Expression:
    """Residue of the terms whose exponential coefficient in ``var`` is positive."""
    if var is None:
        var = expr.nlive - 1
    kept = Expression(expr.ring, expr.nres, [t for t in expr.terms if t.lam[var] > 0], expr.nlive)
    return residue_single(kept, var)


def iterated_residue_poly(expr: Expression, extra_order: int = 0) -> MultiPoly:
    """Iterated residue as a polynomial in the non-residue (jet) variables."""
    while expr.nlive:
        expr = residue_single(expr, expr.nlive - 1, extra_order)
    total = expr.ring.zero()
    for t in expr.terms:
        if t.rat.den:
            raise ResidueError("denominator survived all residues")
        total = total + t.rat.num
    return total


def iterated_residue(expr: Expression, extra_order: int = 0):
    """Scalar result: a Fraction, or a DeltaJet when the ring carries jet variables."""
    total = iterated_residue_poly(expr, extra_order)
    return scalar_from_poly(total, expr.nres)


def scalar_from_poly(p: MultiPoly, nres: int):
    ring = p.ring
    if ring.nvars == nres:
        return to_fraction(p.constant_term())
    caps = ring.caps[nres:]
    coeffs = {}
    for exps, c in p.coefficients().items():
        if any(exps[:nres]):
            raise ResidueError("residue variables survived")
        coeffs[exps[nres:]] = c
    return DeltaJet.from_dict(tuple(c if c is not None else 0 for c in caps), coeffs)


def differentiate(expr: Expression, var: int) -> Expression:
    """Symbolic derivative in ``var``; used to test that residues kill derivatives."""
    out: list[ExpTerm] = []
    for t in expr.terms:
        rat = t.rat
        lam_v = t.lam[var]
        if lam_v:
            out.append(ExpTerm(t.lam, t.euler, rat * lam_v))
        num = rat.num
        dn = num.diff(var)
        if not dn.is_zero():
            out.append(ExpTerm(t.lam, t.euler, RatFunc(dn, rat.den)))
        for idx, (f, k) in enumerate(rat.den):
            df = f.diff(var)
            if df.is_zero():
                continue
            den = rat.den[:idx] + ((f, k + 1),) + rat.den[idx + 1:]
            out.append(ExpTerm(t.lam, t.euler, RatFunc(num * df * (-k), den)))
        c, m = t.euler[var]
        if m:
            # d/dv (e^{cv}-1)^{-m} = -m c [(e^{cv}-1)^{-m} + (e^{cv}-1)^{-m-1}]
            for mm in (m, m + 1):
                eu = t.euler[:var] + ((c, mm),) + t.euler[var + 1:]
                out.append(ExpTerm(t.lam, eu, rat * (-m * c)))
    return Expression(expr.ring, expr.nres, out, expr.nlive)

