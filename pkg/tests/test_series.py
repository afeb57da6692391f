import math

import pytest
from hypothesis import given, settings, strategies as st

from qschur.errors import DivergenceError, TruncationError, UsageError
from qschur.series import (MultiSeries, TruncationBox, eval_x_one, invert_unit, monomial_exponents,
                           parse_monomial, pochhammer, pochhammer_inf, product_side, qbinomial,
                           qbinomial_coeffs, substitute_x_power)
from qschur.weighted import enumerate_D

BOX = TruncationBox(r=2, qmax=6, umax=2, dmax=2, xmax=2)


def exps_in(box):
    return st.tuples(st.integers(0, box.qmax), *[st.integers(0, u) for u in box.umax],
                     st.integers(0, box.dmax), st.integers(0, box.xmax))


series = st.dictionaries(exps_in(BOX), st.integers(-5, 5), max_size=8).map(lambda t: MultiSeries(BOX, t))


@given(series, series)
def test_addition_and_product_commute(a, b):
    assert a + b == b + a
    assert a * b == b * a


@settings(max_examples=50)
@given(series, series, series)
def test_associative_and_distributive(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) - b == a


@settings(max_examples=50)
@given(series, st.integers(-3, 3).filter(lambda c: c in (1, -1)))
def test_inverse_of_unit(a, c):
    a = a - a.constant_term() + c
    assert a * invert_unit(a) == 1


def test_invert_non_unit_rejected():
    with pytest.raises(Exception):
        invert_unit(MultiSeries.monomial(BOX, q=1) * 2 + 2)


def test_product_truncates_to_box():
    q = MultiSeries.monomial(BOX, q=4)
    assert q * q == 0
    assert (q * MultiSeries.monomial(BOX, q=2)).coeff(monomial_exponents(2, q=6)) == 1


def test_mixed_boxes_rejected():
    other = TruncationBox(r=1, qmax=6)
    with pytest.raises(UsageError):
        MultiSeries.one(BOX) + MultiSeries.one(other)


def test_qbinomial_basics():
    assert qbinomial_coeffs(4, 2) == (1, 1, 2, 1, 1)
    assert qbinomial_coeffs(3, -1) == () == qbinomial_coeffs(3, 5)
    for m in range(9):
        for k in range(m + 1):
            c = qbinomial_coeffs(m, k)
            assert sum(c) == math.comb(m, k)
            assert tuple(reversed(c)) == c


def test_pochhammer_finite_matches_product():
    box = TruncationBox(r=1, qmax=10, umax=5)
    u = monomial_exponents(1, u={1: 1})
    direct = MultiSeries.one(box)
    for j in range(4):
        direct = direct * (1 - MultiSeries.monomial(box, q=j, u={1: 1}))
    assert pochhammer(u, 1, 4, box) == direct


def test_pochhammer_inf_constant_diverges():
    with pytest.raises(DivergenceError):
        pochhammer_inf(monomial_exponents(1), 1, TruncationBox(r=1, qmax=3))


def test_product_side_is_d_side_generating_function():
    box = TruncationBox(r=2, qmax=8, umax=2, dmax=2)
    prod = product_side(2, box)
    table = enumerate_D(2, box)
    for (l1, l2, k, n), c in table.items():
        assert prod.coeff(monomial_exponents(2, q=n, u=(l1, l2), d=k)) == c
    assert sum(1 for _ in prod.items()) == len(table)


def test_substitute_x_power():
    s = MultiSeries.monomial(BOX, q=1, x=2)
    assert substitute_x_power(s, 2) == MultiSeries.monomial(BOX, q=5, x=2)
    assert substitute_x_power(s, 3) == 0


def test_eval_x_one_needs_room():
    box = TruncationBox(r=2, qmax=4, umax=2, dmax=1, xmax=3)
    with pytest.raises(TruncationError):
        eval_x_one(MultiSeries.one(box), e_side=True)


def test_text_round_trip():
    s = product_side(1, TruncationBox(r=1, qmax=6, umax=3, dmax=2))
    assert MultiSeries.from_text(s.box, s.to_text()) == s


def test_parse_monomial():
    assert parse_monomial("u1*d*q^2", 2) == (2, 1, 0, 1, 0)
    with pytest.raises(UsageError):
        parse_monomial("u3", 2)
