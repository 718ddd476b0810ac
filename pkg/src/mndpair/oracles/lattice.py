"""Truncated lattice sums: Witten's volume sum and the Szenes identity.

Witten's sum for a numerator N(X) (a polynomial in the Y coordinates):

    c^rho n^g (-1)^{n_+(g-1)} sum_{l_j >= 1} c^{-lambda} N(2 pi i lambda) / varpi(2 pi i lambda)^{2g-2}

with c^rho = (-1)^{n-1} and c^{-lambda} = exp(-2 pi i sum_j gamma_j l_j).  For each
homogeneous part of N of degree D the factor (2 pi i)^{D - n_+(2g-2)} is
pulled out exactly (an integer power of pi times a power of i); only the
remaining lattice sum is done in floating point.

Sums use numpy in double precision, row block by row block in a fixed order,
so repeated runs give identical floats.  ``digits`` above 15 switches to an
mpmath loop, which is only practical for small cutoffs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from ..core.poly import MultiPoly, y_ring
from ..core.ratfunc import RatFunc
from ..residue import Expression, iterated_residue, make_term
from ..su import bracket, n_plus, root_system, tau_poly, tilde_c, TorusPoint, weyl_act_poly, weyl_W_n_minus_1, varpi_poly

BLOCK = 256


@dataclass(frozen=True)
class LatticeSumConfig:
    cutoff: int = 1000
    digits: int = 15
    window_tol: float = 1e-4
    doublings: int = 1

    def __post_init__(self):
        if self.cutoff < 1:
            raise ValueError("cutoff must be at least 1")
        if self.doublings < 1:
            raise ValueError("need at least one doubling")


@dataclass
class LatticeReport:
    value: float
    history: list[tuple[int, float]]
    window: float
    converged: bool
    pi_exponents: list[int]
    imag: float
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "value": f"{self.value:.15e}",
            "history": [[N, f"{v:.15e}"] for N, v in self.history],
            "window": f"{self.window:.3e}",
            "converged": self.converged,
            "pi_exponents": self.pi_exponents,
            "imag": f"{self.imag:.3e}",
            **self.extra,
        }


def homogeneous_parts(p: MultiPoly, k: int) -> dict[int, MultiPoly]:
    parts: dict[int, dict] = {}
    for key, c in p.terms.items():
        deg = sum(p.ring.unpack(key)[:k])
        parts.setdefault(deg, {})[key] = c
    return {D: MultiPoly(p.ring, t) for D, t in sorted(parts.items())}


def _poly_terms(p: MultiPoly, k: int) -> list[tuple[float, tuple[int, ...]]]:
    return [(float(c), p.ring.unpack(key)[:k]) for key, c in sorted(p.terms.items())]


def _chamber_sum_numpy(n: int, gamma: Sequence[Fraction], num_terms, den_power: int, N: int) -> complex:
    k = n - 1
    forms = [np.array([float(a) for a in f]) for f in root_system(n).root_forms()]
    # exact phase: angle = -sum gamma_j l_j, taken mod 1 on a common denominator
    q = math.lcm(*[Fraction(x).denominator for x in gamma]) if gamma else 1
    gi = [int(Fraction(x) * q) for x in gamma]
    table = np.exp(-2j * np.pi * np.arange(q) / q)
    total = 0j
    axis = np.arange(1, N + 1, dtype=np.int64)
    if k == 1:
        blocks = [(axis,)]
    else:
        blocks = []
        for start in range(0, N, BLOCK):
            rows = axis[start:start + BLOCK]
            grids = np.meshgrid(rows, *([axis] * (k - 1)), indexing="ij")
            blocks.append(tuple(g.ravel() for g in grids))
    for ls in blocks:
        lf = [x.astype(np.float64) for x in ls]
        idx = sum(g * x for g, x in zip(gi, ls)) % q
        phase = table[idx]
        varpi = np.ones_like(lf[0])
        for f in forms:
            varpi = varpi * sum(a * x for a, x in zip(f, lf) if a)
        num = np.zeros_like(lf[0])
        for c, e in num_terms:
            t = np.full_like(lf[0], c)
            for x, p in zip(lf, e):
                if p:
                    t = t * x ** p
            num = num + t
        total += complex(np.sum(phase * num / varpi ** den_power))
    return total


def _chamber_sum_mpmath(n: int, gamma, num_terms, den_power: int, N: int, digits: int) -> complex:
    from itertools import product

    k = n - 1
    forms = root_system(n).root_forms()
    with mpmath.workdps(digits):
        total = mpmath.mpc(0)
        for l in product(range(1, N + 1), repeat=k):
            ang = -sum(Fraction(g) * li for g, li in zip(gamma, l))
            ang -= ang.numerator // ang.denominator
            phase = mpmath.expjpi(2 * mpmath.mpf(ang.numerator) / ang.denominator)
            varpi = mpmath.mpf(1)
            for f in forms:
                varpi *= sum(int(a) * li for a, li in zip(f, l))
            num = mpmath.mpf(0)
            for c, e in num_terms:
                t = mpmath.mpf(c)
                for li, p in zip(l, e):
                    t *= mpmath.mpf(li) ** p
                num += t
            total += phase * num / varpi ** den_power
        return complex(total)


def _i_power(E: int) -> complex:
    return (1, 1j, -1, -1j)[E % 4]


def witten_sum_poly(n: int, d: int, g: int, numerator: MultiPoly, config: LatticeSumConfig) -> LatticeReport:
    k = n - 1
    gamma = tilde_c(n, d).coeffs
    parts = homogeneous_parts(numerator, k)
    pref = (-1) ** (n - 1) * n ** g * (-1) ** (n_plus(n) * (g - 1))
    den_deg = n_plus(n) * (2 * g - 2)
    history = []
    pis = []
    imag = 0.0
    N = config.cutoff
    for step in range(config.doublings + 1):
        total = 0j
        pis = []
        for D, part in parts.items():
            E = D - den_deg
            pis.append(E)
            terms = _poly_terms(part, k)
            if config.digits > 15:
                S = _chamber_sum_mpmath(n, gamma, terms, 2 * g - 2, N, config.digits)
            else:
                S = _chamber_sum_numpy(n, gamma, terms, 2 * g - 2, N)
            total += _i_power(E) * (2 * math.pi) ** E * S
        total *= pref
        history.append((N, total.real))
        imag = total.imag
        N *= 2
    value = history[-1][1]
    prev = history[-2][1]
    window = abs(value - prev) / max(abs(value), 1e-300)
    return LatticeReport(value, history, window, window <= config.window_tol, pis, imag)


def witten_sum(n: int, d: int, g: int, m: dict[int, int] | None = None, config: LatticeSumConfig | None = None) -> LatticeReport:
    """Lattice-sum value of prod a_r^{m_r} exp(f_2)."""
    config = config or LatticeSumConfig()
    ring = y_ring(n - 1)
    num = ring.one()
    for r, e in (m or {}).items():
        num = num * tau_poly(n, r, ring) ** e
    return witten_sum_poly(n, d, g, num, config)


# ---------------------------------------------------------------------------
# Szenes identity


@dataclass(frozen=True)
class SzenesFunction:
    """g(X) e^{-<gamma, X>} with g = 1/h for a product h of root forms."""

    n: int
    gamma: tuple[Fraction, ...]
    kind: str  # "y2", "y4" (n = 2) or "varpi2" (n = 3)
    exact: Fraction | None = None

    def denominator(self, ring) -> MultiPoly:
        if self.kind == "y2":
            return ring.var(0) ** 2
        if self.kind == "y4":
            return ring.var(0) ** 4
        if self.kind == "varpi2":
            return varpi_poly(self.n, ring) ** 2
        raise ValueError(self.kind)


SZENES_FUNCTIONS: dict[str, SzenesFunction] = {
    "n2-y2-half": SzenesFunction(2, (Fraction(1, 2),), "y2", Fraction(1, 24)),
    "n2-y4-half": SzenesFunction(2, (Fraction(1, 2),), "y4"),
    "n2-y2-third": SzenesFunction(2, (Fraction(1, 3),), "y2"),
    "n3-varpi2-third": SzenesFunction(3, (Fraction(1, 3), Fraction(1, 3)), "varpi2"),
}


def szenes_rhs(fn: SzenesFunction) -> Fraction:
    """Res sum_w [[w f]] / prod (e^{-Y_j} - 1), exactly."""
    n = fn.n
    k = n - 1
    ring = y_ring(k)
    h = fn.denominator(ring)
    sign = (-1) ** k  # 1/(e^{-Y}-1) = -e^{Y}/(e^{Y}-1)
    terms = []
    for w in weyl_W_n_minus_1(n):
        hw = weyl_act_poly(w, h)
        gw = bracket(w.act(TorusPoint(fn.gamma))).coeffs
        rat = RatFunc.build(ring.const(sign), [(hw, 1)])
        terms.append(make_term(ring, k, rat, [1 - x for x in gw], [(1, 1)] * k))
    return iterated_residue(Expression(ring, k, terms))


def szenes_lhs(fn: SzenesFunction, N: int) -> complex:
    """sum over regular lambda with |l_j| <= N of f(2 pi i lambda)."""
    n = fn.n
    k = n - 1
    ring = y_ring(k)
    h = fn.denominator(ring)
    deg = h.total_degree()
    terms = _poly_terms(h, k)
    forms = [np.array([float(a) for a in f]) for f in root_system(n).root_forms()]
    q = math.lcm(*[x.denominator for x in fn.gamma])
    gi = [int(x * q) for x in fn.gamma]
    table = np.exp(-2j * np.pi * np.arange(q) / q)
    axis = np.concatenate([np.arange(-N, 0), np.arange(1, N + 1)]) if k == 1 else np.arange(-N, N + 1)
    total = 0j
    if k == 1:
        blocks = [(axis,)]
    else:
        blocks = []
        for start in range(0, len(axis), BLOCK):
            grids = np.meshgrid(axis[start:start + BLOCK], *([axis] * (k - 1)), indexing="ij")
            blocks.append(tuple(g.ravel() for g in grids))
    for ls in blocks:
        lf = [x.astype(np.float64) for x in ls]
        regular = np.ones(lf[0].shape, dtype=bool)
        for f in forms:
            regular &= sum(a * x for a, x in zip(f, lf) if a) != 0
        lf = [x[regular] for x in lf]
        li = [x[regular] for x in ls]
        idx = sum(g * x for g, x in zip(gi, li)) % q
        hv = np.zeros_like(lf[0])
        for c, e in terms:
            t = np.full_like(lf[0], c)
            for x, p in zip(lf, e):
                if p:
                    t = t * x ** p
            hv = hv + t
        total += complex(np.sum(table[idx] / hv))
    return _i_power(-deg) * (2 * math.pi) ** (-deg) * total


@dataclass
class SzenesReport:
    function: str
    rhs: Fraction
    lhs: float
    difference: float
    history: list[tuple[int, float]]

    def as_dict(self) -> dict:
        return {
            "function": self.function,
            "rhs": str(self.rhs),
            "lhs": f"{self.lhs:.15e}",
            "difference": f"{self.difference:.3e}",
            "history": [[N, f"{d:.3e}"] for N, d in self.history],
        }


def szenes_check(test_function_id: str, config: LatticeSumConfig | None = None) -> SzenesReport:
    if test_function_id not in SZENES_FUNCTIONS:
        raise ValueError(f"unknown test function {test_function_id!r}; choose from {sorted(SZENES_FUNCTIONS)}")
    config = config or LatticeSumConfig(cutoff=192)
    fn = SZENES_FUNCTIONS[test_function_id]
    rhs = szenes_rhs(fn)
    history = []
    N = config.cutoff
    lhs = 0.0
    for _ in range(config.doublings + 1):
        lhs = szenes_lhs(fn, N).real
        history.append((N, abs(lhs - float(rhs))))
        N *= 2
    return SzenesReport(test_function_id, rhs, lhs, abs(lhs - float(rhs)), history)
