from __future__ import annotations

import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mndpair.core.poly import y_ring
from mndpair.core.ratfunc import RatFunc
from mndpair.oracles.joint import joint_residue, random_raw_terms, raw_to_expression
from mndpair.residue import (
    Expression,
    ResidueError,
    differentiate,
    expand_in,
    iterated_residue,
    make_term,
    res_plus,
    residue_single,
)

from strategies import small_fractions

R1 = y_ring(1)
R2 = y_ring(2)


def single(ring, num, factors=(), lam=(), euler=None):
    k = ring.nvars
    return Expression.single(ring, k, RatFunc.build(num, list(factors)), lam, euler)


def test_expand_euler_factor():
    term = make_term(R1, 1, R1.one(), (0,), [(1, 1)])
    s = expand_in(term, 0, 1)
    assert s.lowest == -1
    assert [c.num.constant_term() for c in s.coeffs] == [1, F(-1, 2), F(1, 12)]


def test_expand_geometric_series():
    y1, y2 = R2.var(0), R2.var(1)
    term = make_term(R2, 2, RatFunc.build(R2.one(), [(y1 + y2, 1)]))
    s = expand_in(term, 1, 2)
    assert s.lowest == 0
    want = [RatFunc.build(R2.one(), [(y1, 1)]), RatFunc.build(-R2.one(), [(y1, 2)]), RatFunc.build(R2.one(), [(y1, 3)])]
    assert list(s.coeffs) == want


def test_expand_exponential_times_monomial():
    y = R1.var(0)
    term = make_term(R1, 1, RatFunc.poly(y ** 2), (1,))
    s = expand_in(term, 0, 3)
    assert s.lowest == 2
    assert [c.num.constant_term() for c in s.coeffs] == [1, 1]


def test_residue_single_examples():
    y = R1.var(0)
    assert iterated_residue(single(R1, R1.one(), [(y, 1)])) == 1
    assert iterated_residue(single(R1, R1.one(), lam=(1,))) == 0
    # e^X / (X^2 (1 - e^{2X})) = -e^X / (X^2 (e^{2X} - 1))
    assert iterated_residue(single(R1, -R1.one(), [(y, 2)], (1,), [(2, 1)])) == F(1, 12)


def test_iterated_residue_examples():
    y1, y2 = R2.var(0), R2.var(1)
    assert iterated_residue(single(R2, R2.one(), [(y1, 2), (y2, 1)], (1, 0))) == 1
    assert iterated_residue(single(R2, R2.one(), [(y1, 1), (y2, 1), (y1 + y2, 1)])) == 0


def test_residue_order_is_fixed():
    y1, y2 = R2.var(0), R2.var(1)
    e = single(R2, R2.one(), [(y1, 1), (y2, 1)])
    with pytest.raises(ResidueError):
        residue_single(e, 0)


def test_res_plus_examples():
    y = R1.var(0)
    one = RatFunc.build(R1.one(), [(y, 1)])

    def expr(*pairs):
        return Expression(R1, 1, [make_term(R1, 1, one * c, (lam,)) for lam, c in pairs])

    assert iterated_residue(res_plus(expr((1, 1), (-1, 1)))) == 1
    assert iterated_residue(res_plus(expr((0, 1)))) == 0
    assert iterated_residue(res_plus(expr((2, 1), (1, -3)))) == -2


def _random_expr(seed: int, nvars: int) -> Expression:
    return raw_to_expression(random_raw_terms(random.Random(seed), nvars))


@given(st.integers(0, 10 ** 6), st.integers(1, 2), small_fractions, small_fractions)
def test_linearity(seed, k, a, b):
    f = _random_expr(seed, k)
    g = _random_expr(seed + 1, k)
    assert iterated_residue(f.scaled(a) + g.scaled(b)) == a * iterated_residue(f) + b * iterated_residue(g)


@given(st.integers(0, 10 ** 6), st.integers(1, 2))
def test_residue_of_derivative_vanishes(seed, k):
    f = _random_expr(seed, k)
    inner = residue_single(differentiate(f, k - 1))
    if k == 1:
        assert iterated_residue(differentiate(f, 0)) == 0
        return
    # the inner residue vanishes as a function of Y1: every Laurent coefficient is 0
    y1 = R2.var(0)
    for j in range(6):
        assert iterated_residue(inner.times_poly(y1 ** j)) == 0


@given(st.integers(0, 10 ** 6), st.integers(1, 2), st.integers(1, 4))
def test_extra_order_changes_nothing(seed, k, extra):
    f = _random_expr(seed, k)
    assert iterated_residue(f, extra_order=extra) == iterated_residue(f)


@given(st.integers(0, 10 ** 6), st.integers(1, 2))
def test_matches_joint_expansion_oracle(seed, k):
    terms = random_raw_terms(random.Random(seed), k)
    assert iterated_residue(raw_to_expression(terms)) == joint_residue(terms)


def test_dump_is_deterministic():
    a = _random_expr(7, 2)
    b = _random_expr(7, 2)
    assert a.dump() == b.dump()
    assert (a + b).dump() == (b + a).dump()
