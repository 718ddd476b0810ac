"""Intersection pairings as iterated residues.

Every route builds one Expression per Weyl element w of S_{n-1} and sums
them.  Shared notation:

* ``c_w = [[w c~]]`` with simple-root coefficients gamma; <c_w, X> = sum gamma_j Y_j.
* ``q = tau_2 + sum_r d_r tau_r`` with nilpotent parameters d_r (jet variables).
* Directional derivatives along simple roots: d_a f = sum_j G_{ja} df/dY_j.
* ``Q_ab = d_a d_b q``, ``det H = det(-Q)/n``, ``B_j = -d_j q``.

Routes
------
a-classes
    sign/n! * sum_w Res[ e^{-<c_w,X>} n^g prod tau_r(X)^{m_r}
                          / (varpi^{2g-2} prod (1 - e^{-Y_j})) ]   (canonical)
    sign/n! * sum_w Res[ e^{+<c_w,X>} n^g prod tau_r(-X)^{m_r}
                          / (varpi^{2g-2} prod (e^{Y_j} - 1)) ]    (``mirrored``)
    with sign = (-1)^{n_+(g-1)}.  Both forms agree: replacing X by -X turns
    one into the other up to (-1)^{n-1} from the Euler factors and
    (-1)^{n-1} from the residue orientation.
f-classes
    sign n^g/n! * sum_w Res[ e^{dq_X(c_w)} prod tau_r^{m_r} (det H)^g
                              / (varpi^{2g-2} prod (1 - e^{-B_j})) ]
    taken in the jet ring; the coefficient of prod d_r^{n_r} times prod n_r!
    is the pairing with prod f_r^{n_r}.
b-classes
    the f-class integrand times, for each index j <= g, the determinant of
    [T_{r s}(-X)] over the classes carrying j and j+g, where
    T_{rs}(-X) = -v_r^T Q^{-1} v_s and (v_r)_a = d_a tau_r.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import factorial, gcd
from typing import Iterable, Mapping, Sequence

from .core.jet import DeltaJet, derivative_factor, jet_extract
from .core.poly import MultiPoly, PolyRing, y_ring
from .core.rational import ONE, Q, to_fraction, to_q
from .core.ratfunc import RatFunc
from .parallel import map_ordered
from .residue import Expression, iterated_residue, make_term
from .su import (
    TorusPoint,
    bracket,
    directional,
    n_plus,
    root_polys,
    root_system,
    simple_directional,
    tau_poly,
    tilde_c,
    weyl_W_n_minus_1,
)

ROUTES = ("mainab", "t96b", "eq936", "binverse-check")

#: Sign picked up by each symplectic pair b_r^j b_s^{j+g}, fixed by comparing
#: the genus-g pairing with one pair against the genus g-1 pairing without it.
B_PAIR_SIGN = -1


class PairingError(ValueError):
    pass


@dataclass(frozen=True)
class PairingSpec:
    n: int
    d: int
    g: int
    a: tuple[tuple[int, int], ...] = ()
    f: tuple[tuple[int, int], ...] = ()
    b: tuple[tuple[int, int], ...] = ()
    epsilon: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "a", _normalize_exponents(self.a))
        object.__setattr__(self, "f", _normalize_exponents(self.f))
        object.__setattr__(self, "b", tuple((int(r), int(j)) for r, j in self.b))
        if self.epsilon is not None:
            object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        self.validate()

    def validate(self) -> None:
        n, d, g = self.n, self.d, self.g
        if n < 2:
            raise PairingError("n must be at least 2")
        if gcd(n, d) != 1:
            raise PairingError(f"n={n} and d={d} must be coprime")
        if g < 2:
            raise PairingError("genus must be at least 2")
        for r, m in self.a:
            if not 2 <= r <= n:
                raise PairingError(f"a_{r} does not exist for n={n}")
            if m < 0:
                raise PairingError("negative exponent")
        for r, m in self.f:
            if not 3 <= r <= n:
                raise PairingError(f"f_{r} does not exist for n={n} (f_2 enters as exp f_2)")
            if m < 0:
                raise PairingError("negative exponent")
        for r, j in self.b:
            if not 2 <= r <= n:
                raise PairingError(f"b_{r} does not exist for n={n}")
            if not 1 <= j <= 2 * g:
                raise PairingError(f"b index j={j} outside 1..{2 * g}")
        if self.epsilon is not None and self.epsilon == 0:
            raise PairingError("epsilon must be non-zero")

    @property
    def a_exponents(self) -> dict[int, int]:
        return dict(self.a)

    @property
    def f_exponents(self) -> dict[int, int]:
        return dict(self.f)

    def degree(self) -> int:
        deg = sum(2 * r * m for r, m in self.a)
        deg += sum((2 * r - 2) * m for r, m in self.f)
        deg += sum(2 * r - 1 for r, _ in self.b)
        return deg

    def dimension(self) -> int:
        return (self.n * self.n - 1) * (2 * self.g - 2)

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "g": self.g,
            "a": {str(r): m for r, m in self.a},
            "f": {str(r): m for r, m in self.f},
            "b": [f"{r}:{j}" for r, j in self.b],
            "epsilon": None if self.epsilon is None else str(self.epsilon),
        }


def _normalize_exponents(pairs) -> tuple[tuple[int, int], ...]:
    if isinstance(pairs, Mapping):
        pairs = pairs.items()
    acc: Counter = Counter()
    for r, m in pairs:
        acc[int(r)] += int(m)
    return tuple(sorted((r, m) for r, m in acc.items() if m))


@dataclass(frozen=True)
class PairingResult:
    value: Fraction
    route: str
    metadata: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"value": self.value, "route": self.route, "metadata": dict(self.metadata)}


# ---------------------------------------------------------------------------
# shared algebra


def weyl_phases(n: int, d: int, shift: Sequence[int] | None = None) -> list[tuple[Fraction, ...]]:
    """Simple-root coefficients of [[w c~]] for w in S_{n-1}, identity first.

    ``shift`` adds an integer-lattice vector to c~ before the Weyl action; the
    bracket must absorb it.
    """
    c = tilde_c(n, d)
    if shift is not None:
        c = c + TorusPoint(tuple(shift))
    return [bracket(w.act(c)).coeffs for w in weyl_W_n_minus_1(n)]


def jet_ring(n: int, caps: Mapping[int, int] | None = None) -> PolyRing:
    """Y_1..Y_{n-1} plus one capped variable d_r for each r with a positive cap."""
    jets = {f"d{r}": c for r, c in sorted((caps or {}).items()) if c > 0}
    for r in (caps or {}):
        if not 3 <= r <= n:
            raise PairingError(f"f_{r} does not exist for n={n}")
    return y_ring(n - 1, jets)


def jet_var(ring: PolyRing, r: int) -> MultiPoly | None:
    name = f"d{r}"
    return ring.var(name) if name in ring.names else None


def total_jet_degree(ring: PolyRing, nres: int) -> int:
    return sum(c for c in ring.caps[nres:] if c is not None)


class QData:
    """q = tau_2 + sum d_r tau_r and its derivatives in a jet ring."""

    def __init__(self, n: int, ring: PolyRing):
        self.n = n
        self.ring = ring
        self.rank = n - 1
        self.taus = {r: tau_poly(n, r, ring) for r in range(2, n + 1)}
        self.perturbation = ring.zero()
        for r in range(3, n + 1):
            dv = jet_var(ring, r)
            if dv is not None:
                self.perturbation = self.perturbation + dv * self.taus[r]
        self.q = self.taus[2] + self.perturbation
        k = self.rank
        self.grad = [simple_directional(self.q, a, n) for a in range(k)]
        self.hess = [[simple_directional(self.grad[a], b, n) for b in range(k)] for a in range(k)]
        self._inv = None

    @property
    def B(self) -> list[MultiPoly]:
        return [-g for g in self.grad]

    def det_H(self) -> MultiPoly:
        k = self.rank
        neg = [[-self.hess[a][b] for b in range(k)] for a in range(k)]
        return det(neg, self.ring) * Fraction(1, self.n)

    def phase_nilpotent(self, gamma: Sequence) -> MultiPoly:
        """The jet part of dq_X(c) for c with simple-root coefficients gamma."""
        return directional(self.perturbation, gamma, self.n)

    def hess_inverse(self) -> list[list[MultiPoly]]:
        """Q^{-1} = sum_k (-A^{-1} N)^k A^{-1} with A = -G and N = Q - A nilpotent."""
        if self._inv is not None:
            return self._inv
        rs = root_system(self.n)
        k = self.rank
        ring = self.ring
        Ainv = [[ring.const(-x) for x in row] for row in rs.gram_inverse()]
        G = rs.gram()
        N = [[self.hess[a][b] + G[a][b] for b in range(k)] for a in range(k)]
        M = _matmul([[-x for x in row] for row in Ainv], N, ring)
        term = Ainv
        total = Ainv
        for _ in range(total_jet_degree(ring, k)):
            term = _matmul(M, term, ring)
            total = [[total[a][b] + term[a][b] for b in range(k)] for a in range(k)]
        self._inv = total
        return total

    def t_rs(self, r: int, s: int) -> MultiPoly:
        """T_{rs}(-X) = -v_r^T Q^{-1} v_s."""
        if not (2 <= r <= self.n and 2 <= s <= self.n):
            raise PairingError("T_rs index out of range")
        inv = self.hess_inverse()
        vr = [simple_directional(self.taus[r], a, self.n) for a in range(self.rank)]
        vs = [simple_directional(self.taus[s], a, self.n) for a in range(self.rank)]
        out = self.ring.zero()
        for a in range(self.rank):
            for b in range(self.rank):
                out = out + vr[a] * inv[a][b] * vs[b]
        return -out


def _matmul(A, B, ring):
    k = len(A)
    return [[sum((A[i][t] * B[t][j] for t in range(k)), ring.zero()) for j in range(k)] for i in range(k)]


def det(M: list[list[MultiPoly]], ring: PolyRing) -> MultiPoly:
    k = len(M)
    if k == 0:
        return ring.one()
    out = ring.zero()
    for perm in permutations(range(k)):
        term = ring.const(_perm_sign(perm))
        for i, p in enumerate(perm):
            term = term * M[i][p]
            if term.is_zero():
                break
        out = out + term
    return out


def permanent(M: list[list[MultiPoly]], ring: PolyRing) -> MultiPoly:
    k = len(M)
    out = ring.zero()
    for perm in permutations(range(k)):
        term = ring.one()
        for i, p in enumerate(perm):
            term = term * M[i][p]
        out = out + term
    return out


def _perm_sign(perm: Sequence[int]) -> int:
    s = 1
    p = list(perm)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            s = -s
    return s


def exp_truncated(p: MultiPoly, order: int) -> MultiPoly:
    """sum_{k<=order} p^k/k! for nilpotent p."""
    out = p.ring.one()
    term = p.ring.one()
    for k in range(1, order + 1):
        term = term * p * Fraction(1, k)
        if term.is_zero():
            break
        out = out + term
    return out


def _h_derivative_tables(order: int) -> list[list[Fraction]]:
    """Coefficients in u of the k-th derivative of h = 1 + u, where u' = -u - u^2."""
    tables = [[Fraction(1), Fraction(1)]]
    for _ in range(order):
        p = tables[-1]
        dp = [i * p[i] for i in range(1, len(p))]  # coefficients of p'(u), index = power
        # p'(u) * (-u - u^2)
        out = [Fraction(0)] * (len(dp) + 2)
        for i, c in enumerate(dp):
            out[i + 1] -= c
            out[i + 2] -= c
        tables.append(out)
    return tables


def euler_shift_expansion(eps: MultiPoly, order: int) -> dict[int, MultiPoly]:
    """1/(1 - e^{-(Y+eps)}) = sum_m coeff_m * (e^Y - 1)^{-m} for nilpotent eps."""
    ring = eps.ring
    tables = _h_derivative_tables(order)
    out: dict[int, MultiPoly] = {}
    epow = ring.one()
    for k in range(order + 1):
        if k:
            epow = epow * eps * Fraction(1, k)
            if epow.is_zero():
                break
        for m, c in enumerate(tables[k]):
            if c:
                out[m] = out.get(m, ring.zero()) + epow * c
    return {m: p for m, p in out.items() if not p.is_zero()}


def _root_denominator(n: int, ring: PolyRing, power: int) -> list[tuple[MultiPoly, int]]:
    if power == 0:
        return []
    return [(r, power) for r in root_polys(n, ring)]


def _global_sign(n: int, g: int) -> int:
    return -1 if (n_plus(n) * (g - 1)) % 2 else 1


def _tau_product(n: int, ring: PolyRing, exps: Mapping[int, int], negate: bool = False) -> MultiPoly:
    out = ring.one()
    for r, m in exps.items():
        t = tau_poly(n, r, ring)
        if negate and r % 2:
            t = -t
        out = out * t ** m
    return out


def _sum_weyl(exprs: list[Expression]) -> Expression:
    total = exprs[0]
    for e in exprs[1:]:
        total = total + e
    return total


# ---------------------------------------------------------------------------
# a-classes


def integrand_mainab(spec: PairingSpec, variant: str = "canonical", shift=None, ring: PolyRing | None = None) -> Expression:
    """Integrand for a pairing of a-classes with exp f_2.

    ``variant`` is ``canonical`` (e^{-<c,X>}, tau(X), 1 - e^{-Y}) or
    ``mirrored`` (e^{+<c,X>}, tau(-X), e^{Y} - 1).
    """
    if spec.b or spec.f:
        raise PairingError("the a-class route takes neither b- nor f-classes")
    n, g = spec.n, spec.g
    ring = ring or y_ring(n - 1)
    k = n - 1
    pref = Fraction(_global_sign(n, g) * n ** g, factorial(n))
    if variant == "canonical":
        num = _tau_product(n, ring, spec.a_exponents) * pref
    elif variant == "mirrored":
        num = _tau_product(n, ring, spec.a_exponents, negate=True) * pref
    else:
        raise PairingError(f"unknown variant {variant!r}")
    den = _root_denominator(n, ring, 2 * g - 2)
    rat = RatFunc.build(num, den)
    terms = []
    for gamma in weyl_phases(n, spec.d, shift):
        if variant == "canonical":
            lam = [1 - x for x in gamma]
        else:
            lam = list(gamma)
        terms.append(make_term(ring, k, rat, lam, [(1, 1)] * k))
    return Expression(ring, k, terms)


def pairing_a(spec: PairingSpec, variant: str = "canonical", shift=None) -> PairingResult:
    if spec.epsilon is not None:
        return epsilon_scaled_pairing(spec, spec.epsilon)
    expr = integrand_mainab(spec, variant, shift)
    value = iterated_residue(expr)
    return PairingResult(
        to_fraction(value),
        "mainab",
        {
            "variant": variant,
            "residue_order": _order_label(spec.n),
            "degree": spec.degree(),
            "dimension": spec.dimension(),
            "terms": len(expr.terms),
        },
    )


def _order_label(n: int) -> str:
    return ",".join(f"Y{j}" for j in range(n - 1, 0, -1))


def epsilon_scaled_pairing(spec: PairingSpec, eps) -> PairingResult:
    """Pairing of prod a_r^{m_r} with exp(eps f_2).

    Built from e^{eps<c,X>}, eps^{(n-1)g} n^g and (e^{eps Y_j} - 1); for a class
    of top degree only the eps^0 part of exp(eps f_2) contributes.
    """
    if spec.b or spec.f:
        raise PairingError("epsilon scaling applies to a-classes only")
    eps = Fraction(eps)
    if eps == 0:
        raise PairingError("epsilon must be non-zero")
    n, g = spec.n, spec.g
    ring = y_ring(n - 1)
    k = n - 1
    pref = Fraction(_global_sign(n, g) * n ** g, factorial(n)) * eps ** (k * g)
    num = _tau_product(n, ring, spec.a_exponents, negate=True) * pref
    rat = RatFunc.build(num, _root_denominator(n, ring, 2 * g - 2))
    terms = [make_term(ring, k, rat, [eps * x for x in gamma], [(eps, 1)] * k) for gamma in weyl_phases(n, spec.d)]
    value = iterated_residue(Expression(ring, k, terms))
    return PairingResult(
        to_fraction(value),
        "mainab",
        {"variant": "mirrored-scaled", "epsilon": str(eps), "residue_order": _order_label(n), "degree": spec.degree(), "dimension": spec.dimension()},
    )


def f2_power_pairing(spec: PairingSpec) -> tuple[int, Fraction]:
    """(k, prod a_r^{m_r} f_2^k [M]) where k makes the class top-degree."""
    gap = spec.dimension() - spec.degree()
    if gap < 0 or gap % 2:
        return max(gap // 2, 0), Fraction(0)
    k = gap // 2
    value = epsilon_scaled_pairing(spec, 1).value
    return k, value * factorial(k)


# ---------------------------------------------------------------------------
# f-classes and b-classes


def integrand_t96b(spec: PairingSpec, ring: PolyRing, extra: MultiPoly | None = None, shift=None) -> Expression:
    n, g = spec.n, spec.g
    k = n - 1
    qd = QData(n, ring)
    order = total_jet_degree(ring, k)
    pref = Fraction(_global_sign(n, g) * n ** g, factorial(n))
    base = _tau_product(n, ring, spec.a_exponents) * qd.det_H() ** g * pref
    if extra is not None:
        base = base * extra
    den = _root_denominator(n, ring, 2 * g - 2)
    # 1/(1 - e^{-B_j}) with B_j = Y_j + eps_j
    per_var = []
    for j, Bj in enumerate(qd.B):
        eps = Bj - ring.var(j)
        per_var.append(sorted(euler_shift_expansion(eps, order).items()))

    def weyl_term(gamma) -> list:
        phase = exp_truncated(qd.phase_nilpotent(gamma), order)
        lam = [-x for x in gamma]
        top = base * phase
        out = []
        for combo in _product(per_var):
            num = top
            euler = []
            for m, c in combo:
                num = num * c
                euler.append((1, m))
            if num.is_zero():
                continue
            out.append(make_term(ring, k, RatFunc.build(num, den, full=False), lam, euler))
        return out

    terms: list = []
    for chunk in map_ordered(weyl_term, weyl_phases(n, spec.d, shift), min_items=2):
        terms.extend(chunk)
    return Expression(ring, k, terms)


def _product(lists):
    if not lists:
        yield ()
        return
    head, *rest = lists
    for x in head:
        for tail in _product(rest):
            yield (x,) + tail


def _jet_value(value, spec: PairingSpec, ring: PolyRing) -> Fraction:
    if isinstance(value, DeltaJet):
        names = ring.names[spec.n - 1:]
        md = tuple(spec.f_exponents.get(int(nm[1:]), 0) for nm in names)
        return jet_extract(value, md) * derivative_factor(md)
    return to_fraction(value)


def pairing_f(spec: PairingSpec, shift=None) -> PairingResult:
    if spec.b:
        raise PairingError("use pairing_b for b-classes")
    ring = jet_ring(spec.n, spec.f_exponents)
    expr = integrand_t96b(spec, ring, shift=shift)
    value = iterated_residue(expr)
    return PairingResult(
        _jet_value(value, spec, ring),
        "t96b",
        {
            "residue_order": _order_label(spec.n),
            "jet_caps": {nm: c for nm, c in zip(ring.names[spec.n - 1:], ring.caps[spec.n - 1:])},
            "terms": len(expr.terms),
            "degree": spec.degree(),
            "dimension": spec.dimension(),
        },
    )


def t_rs(n: int, r: int, s: int, q: QData | None = None) -> MultiPoly:
    """T_{rs}(-X) in the ring of ``q`` (default: q = tau_2, no jets)."""
    q = q or QData(n, y_ring(n - 1))
    return q.t_rs(r, s)


def b_structure(spec: PairingSpec) -> tuple[int, list[tuple[list[int], list[int]]], int] | None:
    """Group the b-classes into symplectic blocks.

    Returns (koszul_sign, blocks, pair_count) where blocks[j-1] = (r's at j, s's at j+g)
    in order of appearance, or None when the class vanishes identically.
    """
    g = spec.g
    seen = Counter(spec.b)
    if any(c > 1 for c in seen.values()):
        return None  # an odd class squared
    blocks: list[tuple[list[int], list[int]]] = [([], []) for _ in range(g)]
    pos: list[tuple[list[int], list[int]]] = [([], []) for _ in range(g)]
    for idx, (r, j) in enumerate(spec.b):
        if j <= g:
            blocks[j - 1][0].append(r)
            pos[j - 1][0].append(idx)
        else:
            blocks[j - g - 1][1].append(r)
            pos[j - g - 1][1].append(idx)
    if any(len(R) != len(S) for R, S in blocks):
        return None
    canonical = []
    for (pr, ps) in pos:
        for a, b in zip(pr, ps):
            canonical.extend([a, b])
    sign = _perm_sign(_ranks(canonical))
    return sign, blocks, sum(len(R) for R, _ in blocks)


def _ranks(seq: Sequence[int]) -> list[int]:
    order = sorted(range(len(seq)), key=lambda i: seq[i])
    out = [0] * len(seq)
    for rank, i in enumerate(order):
        out[i] = rank
    return out


def pairing_b(spec: PairingSpec, contraction: str = "grassmann", shift=None) -> PairingResult:
    """Pairing with b-classes.

    ``contraction`` is ``grassmann`` (signed sum over matchings, consistent
    with the anticommutation of odd classes) or ``permanent`` (unsigned sum).
    The two agree whenever each index j carries at most one class.
    """
    structure = b_structure(spec)
    if structure is None:
        return PairingResult(Fraction(0), "eq936", {"reason": "b-classes do not form symplectic pairs"})
    if contraction not in ("grassmann", "permanent"):
        raise PairingError(f"unknown contraction {contraction!r}")
    koszul, blocks, pairs = structure
    ring = jet_ring(spec.n, spec.f_exponents)
    qd = QData(spec.n, ring)
    insertion = ring.one()
    for R, S in blocks:
        if not R:
            continue
        M = [[qd.t_rs(r, s) for s in S] for r in R]
        insertion = insertion * (det(M, ring) if contraction == "grassmann" else permanent(M, ring))
    expr = integrand_t96b(PairingSpec(spec.n, spec.d, spec.g, spec.a, spec.f), ring, insertion, shift)
    raw = _jet_value(iterated_residue(expr), spec, ring)
    value = raw * koszul * B_PAIR_SIGN ** pairs
    return PairingResult(
        value,
        "eq936",
        {
            "raw_value": str(raw),
            "b_pair_sign": B_PAIR_SIGN,
            "pairs": pairs,
            "koszul_sign": koszul,
            "contraction": contraction,
            "residue_order": _order_label(spec.n),
        },
    )


def pair(spec: PairingSpec, route: str | None = None) -> PairingResult:
    """Dispatch to the route that fits the request (or the one asked for)."""
    if route is None:
        if spec.epsilon is not None:
            return epsilon_scaled_pairing(spec, spec.epsilon)
        route = "eq936" if spec.b else ("t96b" if spec.f else "mainab")
    if route == "mainab":
        if spec.b or spec.f:
            raise PairingError("route mainab handles a-classes only")
        return pairing_a(spec)
    if route == "t96b":
        if spec.b:
            raise PairingError("route t96b does not take b-classes")
        return pairing_f(spec)
    if route == "eq936":
        return pairing_b(spec)
    raise PairingError(f"unknown route {route!r}")


# ---------------------------------------------------------------------------
# change of variables X -> B^{-1}(X)


def b_inverse(qd: QData) -> dict[int, MultiPoly]:
    """Images of Y_j under Z -> B^{-1}(Z), by fixed-point iteration in the jet ring."""
    ring = qd.ring
    k = qd.rank
    pert_grad = [simple_directional(qd.perturbation, a, qd.n) for a in range(k)]
    images = {j: ring.var(j) for j in range(k)}
    for _ in range(total_jet_degree(ring, k) + 1):
        images = {j: ring.var(j) + pert_grad[j].substitute(images) for j in range(k)}
    return images


def inverse_unit(p: MultiPoly, order: int) -> MultiPoly:
    """1/p for p = 1 + nilpotent."""
    nil = p - 1
    if nil.constant_term():
        raise PairingError("not a unit of the form 1 + nilpotent")
    out = p.ring.one()
    term = p.ring.one()
    for _ in range(order):
        term = term * (-nil)
        if term.is_zero():
            break
        out = out + term
    return out


def binverse_numerator(n: int, g: int, tau_exps: Mapping[int, int], ring: PolyRing) -> MultiPoly:
    """tau(B^{-1}Z) * det H(B^{-1}Z)^{g-1} * rho(Z)^{-(2g-2)}, rho = varpi(B^{-1}Z)/varpi(Z)."""
    qd = QData(n, ring)
    k = n - 1
    order = total_jet_degree(ring, k)
    inv = b_inverse(qd)
    num = _tau_product(n, ring, tau_exps).substitute(inv)
    num = num * qd.det_H().substitute(inv) ** (g - 1)
    rho = ring.one()
    for root in root_polys(n, ring):
        moved = root.substitute(inv)
        ratio = moved.exact_div(root)
        if ratio is None:
            raise PairingError("B^{-1} does not preserve a root hyperplane")
        rho = rho * ratio
    return num * inverse_unit(rho, order) ** (2 * g - 2)


@dataclass(frozen=True)
class BinverseReport:
    passed: bool
    direct: object
    substituted: object

    def as_dict(self) -> dict:
        return {"passed": self.passed, "direct": _jet_str(self.direct), "substituted": _jet_str(self.substituted)}


def _jet_str(v) -> str | dict:
    if isinstance(v, DeltaJet):
        return {",".join(map(str, k)): str(c) for k, c in sorted(v.coefficients().items())}
    return str(v)


def binverse_identity_check(n: int, d: int, g: int, tau_exps: Mapping[int, int], caps: Mapping[int, int]) -> BinverseReport:
    """Compare the jet-ring pairing with its form after substituting X = B^{-1}(Z)."""
    ring = jet_ring(n, caps)
    spec = PairingSpec(n, d, g, a=dict(tau_exps))
    direct = iterated_residue(integrand_t96b(spec, ring))
    k = n - 1
    pref = Fraction(_global_sign(n, g) * n ** g, factorial(n))
    num = binverse_numerator(n, g, tau_exps, ring) * pref
    rat = RatFunc.build(num, _root_denominator(n, ring, 2 * g - 2), full=False)
    terms = [make_term(ring, k, rat, [1 - x for x in gamma], [(1, 1)] * k) for gamma in weyl_phases(n, d)]
    substituted = iterated_residue(Expression(ring, k, terms))
    return BinverseReport(direct == substituted, direct, substituted)
