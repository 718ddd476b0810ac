"""Verlinde dimensions: exact iterated residue and finite sine sum.

Residue side, with r = k + n:

    D = sign/n! * sum_w Res[ e^{r<c_w,X>} r^{(n-1)g} n^g prod_{gamma>0} F(gamma(X))
                              / (varpi^{2g-2} prod (e^{r Y_j} - 1)) ]

where F(x) = (x / (e^{x/2} - e^{-x/2}))^{2g-2}.  The series of
x/(e^{x/2} - e^{-x/2}) has coefficients B_m(1/2)/m! = (2^{1-m} - 1) B_m/m!,
so F is even with rational coefficients.  Only terms of total degree at most
n_+(2g-2) can reach the residue, which bounds the expansion.

Sum side (fundamental-weight coordinates l_j >= 1, sum l_j < r):

    V = sum_lambda e^{-2 pi i <lambda - rho, c~>} / prod_{gamma>0} (2 sin(pi <gamma,lambda>/r))^{2g-2}
        * (r^{n-1} n)^{g-1}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import factorial, gcd

import mpmath

from .core.poly import MultiPoly, PolyRing, y_ring
from .core.rational import bernoulli, to_fraction
from .core.ratfunc import RatFunc
from .residue import Expression, iterated_residue, make_term
from .su import n_plus, root_polys, root_system, tilde_c
from .pairing import _global_sign, weyl_phases


class VerlindeError(ValueError):
    pass


@dataclass(frozen=True)
class VerlindeSpec:
    n: int
    d: int
    g: int
    k: int

    def __post_init__(self):
        if self.n < 2:
            raise VerlindeError("n must be at least 2")
        if gcd(self.n, self.d) != 1:
            raise VerlindeError(f"n={self.n} and d={self.d} must be coprime")
        if self.g < 2:
            raise VerlindeError("genus must be at least 2")
        if self.k < 0 or self.k % self.n:
            raise VerlindeError(f"level k={self.k} must be a non-negative multiple of n={self.n}")

    @property
    def r(self) -> int:
        return self.k + self.n


def half_sinh_series(order: int) -> list[Fraction]:
    """Coefficients of x / (e^{x/2} - e^{-x/2}) through x^order."""
    return [Fraction(2) ** (1 - m) * bernoulli(m) / factorial(m) - bernoulli(m) / factorial(m) for m in range(order + 1)]


def _power_series(coeffs: list[Fraction], e: int, order: int) -> list[Fraction]:
    out = [Fraction(1)] + [Fraction(0)] * order
    for _ in range(e):
        nxt = [Fraction(0)] * (order + 1)
        for i, a in enumerate(out):
            if a:
                for j in range(order + 1 - i):
                    nxt[i + j] += a * coeffs[j]
        out = nxt
    return out


def sinh_factor(n: int, g: int, ring: PolyRing, degree: int) -> MultiPoly:
    """prod_{gamma>0} F(gamma(X)) truncated at total degree ``degree``."""
    F = _power_series(half_sinh_series(degree), 2 * g - 2, degree)
    k = n - 1
    res_vars = range(k)
    out = ring.one()
    for root in root_polys(n, ring):
        series = ring.zero()
        power = ring.one()
        for m in range(degree + 1):
            if m:
                power = power * root
            if F[m]:
                series = series + power * F[m]
        out = (out * series).truncate_total(res_vars, degree)
    return out


def verlinde_integrand(spec: VerlindeSpec, extra_degree: int = 0) -> Expression:
    n, g, r = spec.n, spec.g, spec.r
    k = n - 1
    ring = y_ring(k)
    degree = n_plus(n) * (2 * g - 2) + extra_degree
    pref = Fraction(_global_sign(n, g) * r ** (k * g) * n ** g, factorial(n))
    num = sinh_factor(n, g, ring, degree) * pref
    rat = RatFunc.build(num, [(root, 2 * g - 2) for root in root_polys(n, ring)])
    terms = [make_term(ring, k, rat, [r * x for x in gamma], [(r, 1)] * k) for gamma in weyl_phases(n, spec.d)]
    return Expression(ring, k, terms)


def verlinde_residue_D(spec: VerlindeSpec, extra_degree: int = 0) -> Fraction:
    return to_fraction(iterated_residue(verlinde_integrand(spec, extra_degree)))


def dominant_weights(n: int, r: int):
    """Fundamental-weight coordinates l >= 1 with sum(l) < r, in lexicographic order."""
    for l in product(range(1, r), repeat=n - 1):
        if sum(l) < r:
            yield l


def verlinde_terms(spec: VerlindeSpec, precision: int = 50) -> list[tuple[tuple[int, ...], mpmath.mpc]]:
    n, d, g, r = spec.n, spec.d, spec.g, spec.r
    c = tilde_c(n, d).coeffs
    forms = root_system(n).root_forms()
    out = []
    with mpmath.workdps(precision):
        scale = mpmath.mpf(r) ** ((n - 1) * (g - 1)) * mpmath.mpf(n) ** (g - 1)
        for l in dominant_weights(n, r):
            angle = -sum(ci * (li - 1) for ci, li in zip(c, l))
            angle -= angle.numerator // angle.denominator
            phase = mpmath.expjpi(2 * mpmath.mpf(angle.numerator) / angle.denominator)
            denom = mpmath.mpf(1)
            for f in forms:
                s = sum(a * li for a, li in zip(f, l))
                denom *= (2 * mpmath.sinpi(mpmath.mpf(int(s)) / r)) ** (2 * g - 2)
            out.append((l, phase * scale / denom))
    return out


def verlinde_sum_V(spec: VerlindeSpec, precision: int = 50) -> mpmath.mpf:
    """Real part of the finite sum; the imaginary part is checked by verlinde_check."""
    return verlinde_sum_complex(spec, precision).real


def verlinde_sum_complex(spec: VerlindeSpec, precision: int = 50) -> mpmath.mpc:
    with mpmath.workdps(precision):
        total = mpmath.mpc(0)
        for _, t in verlinde_terms(spec, precision):
            total += t
        return +total


@dataclass
class VerlindeReport:
    spec: VerlindeSpec
    D: Fraction
    V: mpmath.mpf
    V_imag: mpmath.mpf
    passed: bool
    messages: list[str] = field(default_factory=list)

    def as_dict(self, digits: int = 20) -> dict:
        return {
            "D": str(self.D),
            "V": mpmath.nstr(self.V, digits, strip_zeros=False),
            "V_imag": mpmath.nstr(self.V_imag, 5),
            "r": self.spec.r,
            "passed": self.passed,
            "messages": list(self.messages),
        }


def verlinde_check(spec: VerlindeSpec, precision: int = 50, tol: float = 1e-9) -> VerlindeReport:
    D = verlinde_residue_D(spec)
    z = verlinde_sum_complex(spec, precision)
    msgs = []
    ok = True
    if D.denominator != 1:
        ok = False
        msgs.append(f"D = {D} is not an integer")
    if D < 0:
        ok = False
        msgs.append(f"D = {D} is negative")
    scale = max(1, abs(D))
    with mpmath.workdps(precision):
        diff = abs(z.real - mpmath.mpf(D.numerator) / D.denominator)
        if diff >= tol * scale:
            ok = False
            msgs.append(f"|V - D| = {mpmath.nstr(diff, 5)} exceeds tolerance")
        if abs(z.imag) >= tol * scale:
            ok = False
            msgs.append(f"imaginary part {mpmath.nstr(z.imag, 5)} does not vanish")
    return VerlindeReport(spec, D, z.real, z.imag, ok, msgs)
