"""Brute-force iterated residues by joint Laurent expansion.

On the region |Y_1| >> |Y_2| >> ... >> |Y_k| every factor of a term has a
convergent Laurent expansion: a linear form is expanded around its outermost
variable, exponentials and (e^{cY} - 1)^{-m} around 0.  The iterated residue
equals the coefficient of prod Y_j^{-1} in the product of these expansions.

This module deliberately shares no code with the residue engine: it uses
plain ``Fraction`` arithmetic on exponent tuples, computes its own Bernoulli
series by power-series inversion, and reads terms from its own description
(:class:`RawTerm`).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Sequence

Mono = tuple[int, ...]


@dataclass(frozen=True)
class RawTerm:
    """exp(lam.Y) * num(Y) / prod L^m * prod_j (e^{c_j Y_j} - 1)^{-m_j}."""

    num: dict[Mono, Fraction]
    den: tuple[tuple[tuple[Fraction, ...], int], ...] = ()
    lam: tuple[Fraction, ...] = ()
    euler: tuple[tuple[Fraction, int], ...] = ()
    nvars: int = field(default=0)

    def __post_init__(self):
        k = self.nvars or len(next(iter(self.num))) if self.num else self.nvars
        object.__setattr__(self, "nvars", k)
        if not self.lam:
            object.__setattr__(self, "lam", (Fraction(0),) * k)
        if not self.euler:
            object.__setattr__(self, "euler", ((Fraction(1), 0),) * k)


def _series_inverse(a: list[Fraction], order: int) -> list[Fraction]:
    out = [Fraction(1) / a[0]]
    for k in range(1, order + 1):
        s = sum(a[i] * out[k - i] for i in range(1, min(k, len(a) - 1) + 1))
        out.append(-s / a[0])
    return out


def _bernoulli_over_factorial(order: int) -> list[Fraction]:
    # x / (e^x - 1) is the reciprocal of (e^x - 1)/x = sum x^i/(i+1)!
    return _series_inverse([Fraction(1, factorial(i + 1)) for i in range(order + 1)], order)


def _mul(a: dict, b: dict, caps: Sequence[int]) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            if any(x > c for x, c in zip(e, caps)):
                continue
            out[e] = out.get(e, Fraction(0)) + ca * cb
    return {e: c for e, c in out.items() if c}


def _unit(k: int, i: int, p: int) -> Mono:
    e = [0] * k
    e[i] = p
    return tuple(e)


def _dominant(form: Sequence[Fraction]) -> int:
    for i, a in enumerate(form):
        if a:
            return i
    raise ValueError("zero linear form in a denominator")


def joint_residue_term(t: RawTerm) -> Fraction:
    k = t.nvars
    forms = [(tuple(Fraction(a) for a in f), m) for f, m in t.den]
    # Innermost first: the excess caps of inner variables bound how far
    # forms dominated by an outer variable must be expanded.
    excess = [0] * k
    mins_by_factor: list[list[int]] = [[0] * k for _ in forms]
    euler_min = [0] * k
    for i in range(k - 1, -1, -1):
        inner = sum(excess[i + 1:])
        total_min = 0
        for idx, (f, m) in enumerate(forms):
            if _dominant(f) != i:
                continue
            pure = all(not a for a in f[i + 1:])
            lo = -m if pure else -m - inner
            mins_by_factor[idx][i] = lo
            total_min += lo
        c, m = t.euler[i]
        euler_min[i] = -m
        total_min += -m
        excess[i] = -1 - total_min
        if excess[i] < 0:
            return Fraction(0)
    caps = excess
    product: dict = {(0,) * k: Fraction(1)}

    # numerator (all exponents >= 0)
    num = {e: Fraction(c) for e, c in t.num.items() if all(x <= cp for x, cp in zip(e, caps))}
    product = _mul(product, num, caps)

    for i in range(k):
        lam = Fraction(t.lam[i])
        if lam:
            ser = {_unit(k, i, p): lam ** p / factorial(p) for p in range(caps[i] + 1)}
            product = _mul(product, ser, caps)
        c, m = t.euler[i]
        if m:
            c = Fraction(c)
            b = _bernoulli_over_factorial(caps[i])
            ser = {(0,) * k: Fraction(1)}
            base = {_unit(k, i, p): b[p] * c ** p for p in range(caps[i] + 1) if b[p]}
            for _ in range(m):
                ser = _mul(ser, base, caps)
            product = _mul(product, {e: v / c ** m for e, v in ser.items()}, caps)

    for idx, (f, m) in enumerate(forms):
        d = _dominant(f)
        lo = mins_by_factor[idx][d]
        ad = f[d]
        steps = -m - lo  # maximal number of expansion steps
        ser: dict = {}
        # L^{-m} = sum_s C(-m, s) ad^{-m-s} Y_d^{-m-s} (sum_{j>d} a_j Y_j)^s
        rest = {_unit(k, j, 1): f[j] for j in range(d + 1, k) if f[j]}
        power = {(0,) * k: Fraction(1)}
        for s in range(steps + 1):
            if s:
                power = _mul(power, rest, caps)
            coef = Fraction((-1) ** s * comb(m + s - 1, s)) / ad ** (m + s)
            shift = (-m - s) - lo  # excess of Y_d
            for e, v in power.items():
                e2 = list(e)
                e2[d] += shift
                if e2[d] > caps[d]:
                    continue
                key = tuple(e2)
                ser[key] = ser.get(key, Fraction(0)) + coef * v
        product = _mul(product, ser, caps)

    return product.get(tuple(caps), Fraction(0))


def joint_residue(terms: Iterable[RawTerm]) -> Fraction:
    return sum((joint_residue_term(t) for t in terms), Fraction(0))


def raw_to_expression(terms: Sequence[RawTerm]):
    """The same terms as an engine Expression (used to compare the two routes)."""
    from ..core.poly import y_ring
    from ..core.ratfunc import RatFunc
    from ..residue import Expression, make_term

    k = terms[0].nvars
    ring = y_ring(k)
    out = []
    for t in terms:
        num = ring.from_dict(t.num)
        factors = [(ring.linear(f), m) for f, m in t.den]
        out.append(make_term(ring, k, RatFunc.build(num, factors), t.lam, t.euler))
    return Expression(ring, k, out)


_FORMS_2 = ((1,),)
_FORMS_3 = ((1, 0), (0, 1), (1, 1))


def random_raw_terms(rng: random.Random, nvars: int, max_pole: int = 6, nterms: int | None = None) -> list[RawTerm]:
    """Small random terms with root-form denominators and total pole order <= max_pole."""
    forms = _FORMS_2 if nvars == 1 else _FORMS_3
    if nvars not in (1, 2):
        raise ValueError("random terms are generated for one or two variables")
    nterms = nterms or rng.randint(1, 3)
    out = []
    for _ in range(nterms):
        budget = rng.randint(1, max_pole)
        den: dict[tuple, int] = {}
        euler = []
        for j in range(nvars):
            m = rng.randint(0, min(1, budget)) if rng.random() < 0.5 else 0
            budget -= m
            scale = Fraction(rng.choice([1, 2, -1, 3]), rng.choice([1, 2]))
            euler.append((scale, m))
        while budget > 0:
            f = tuple(Fraction(a) for a in rng.choice(forms))
            den[f] = den.get(f, 0) + 1
            budget -= 1
        num = {}
        for _ in range(rng.randint(1, 3)):
            e = tuple(rng.randint(0, 2) for _ in range(nvars))
            num[e] = num.get(e, Fraction(0)) + Fraction(rng.randint(-5, 5) or 1, rng.randint(1, 4))
        lam = tuple(Fraction(rng.randint(-6, 6), 6) for _ in range(nvars))
        out.append(RawTerm(num, tuple(den.items()), lam, tuple(euler), nvars))
    return out
