from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from quiver_vertex.partitions import Partition, Box, z_box
from quiver_vertex.qseries import (
    SpecializationContext, GuardError, PoleError, TruncatedSeries, GradedSeries,
    qpochhammer, pochhammer, geometric_factor, ratio_factor, box_factor,
    graded_geometric, frac_str, default_context)


CTX = default_context()
N, CAP = 2, 4

coef = st.fractions(min_value=-5, max_value=5, max_denominator=7)
expo = st.tuples(st.integers(0, 3), st.integers(0, 3))
series = st.dictionaries(expo, coef, max_size=6).map(lambda t: TruncatedSeries(N, CAP, t))
unit = st.tuples(coef.filter(lambda c: c != 0), series).map(
    lambda p: TruncatedSeries.constant(N, CAP, p[0]) + (p[1] - p[1].constant_term()))


@given(series, series, series)
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == TruncatedSeries(N, CAP)
    assert a * TruncatedSeries.one(N, CAP) == a


@given(unit, series)
def test_invert(u, a):
    assert u * u.invert() == TruncatedSeries.one(N, CAP)
    assert (a / u) * u == a


@given(series, series, st.tuples(st.integers(-2, 2), st.integers(-2, 2)))
def test_q_shift_is_ring_map(a, b, e):
    assert (a * b).q_shift(e, CTX) == a.q_shift(e, CTX) * b.q_shift(e, CTX)
    assert a.q_shift(e, CTX).q_shift(tuple(-x for x in e), CTX) == a


def test_truncation_drops_high_degree():
    z = TruncatedSeries.monomial((1, 0), 1, 3)
    assert (z ** 4).is_zero()
    assert (z ** 3).coeff((3, 0)) == 1


def test_cap_mismatch():
    with pytest.raises(ValueError):
        TruncatedSeries.one(2, 3) + TruncatedSeries.one(2, 4)
    with pytest.raises(ValueError):
        TruncatedSeries.one(2, 3) * TruncatedSeries.one(3, 3)
    with pytest.raises(ZeroDivisionError):
        TruncatedSeries.monomial((1, 0), 1, 3).invert()


def test_geometric_small():
    one = TruncatedSeries.one(1, 5)
    m = z_box(Partition([1]), Box(1, 1))
    g = geometric_factor(m, 5, CTX)
    assert g * (one - TruncatedSeries.monomial((1,), 1, 5)) == one
    r = ratio_factor(m, 5, CTX, CTX.hbar, 1)
    assert r.coeff((1,)) == 1 - CTX.hbar
    assert r.coeff((3,)) == 1 - CTX.hbar


def test_box_factor_matches_product():
    # prod_{i<8} (1 - hbar z q^i)/(1 - z q^i) agrees with the q-binomial sum below degree 8
    m = z_box(Partition([1]), Box(1, 1))
    cap = 5
    prod = TruncatedSeries.one(1, cap)
    for i in range(8):
        x = TruncatedSeries.monomial((1,), CTX.q ** i, cap)
        prod = prod * (1 - x * CTX.hbar) / (1 - x)
    tail = box_factor(m, cap, CTX)
    for d in range(cap + 1):
        # the omitted factors i >= 8 only change coefficients by O(q^8) amounts,
        # so compare against the exact q-binomial formula with the same truncation
        exact = qpochhammer(CTX.hbar, d, CTX.q).value / qpochhammer(CTX.q, d, CTX.q).value
        assert tail.coeff((d,)) == exact
        assert abs(float(prod.coeff((d,)) - exact)) < 1e-2


@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(-3, 3), st.integers(0, 3))
def test_pochhammer_split(xh, xq, d, e):
    # (x)_{d+e} = (x)_d (x q^d)_e
    x = CTX.monomial(xh, xq)
    lhs = qpochhammer(x, d + e, CTX.q)
    rhs = qpochhammer(x, d, CTX.q) * qpochhammer(x * CTX.q ** d, e, CTX.q)
    assert lhs.order == rhs.order
    assert lhs.value == rhs.value


def test_pochhammer_zero_tracking():
    assert qpochhammer(Fraction(1), 3, CTX.q).is_zero
    assert qpochhammer(Fraction(1), 0, CTX.q).resolve() == 1
    # (q)_{-1} = 1/(1 - 1): a pole
    p = pochhammer(0, 1, -1, CTX)
    assert p.is_pole
    with pytest.raises(PoleError):
        p.resolve()
    assert (pochhammer(0, 0, 2, CTX) / pochhammer(0, 0, 1, CTX)).order == 0
    assert qpochhammer(CTX.q, -2, CTX.q).is_pole


def test_guard():
    with pytest.raises(GuardError):
        SpecializationContext(q=Fraction(1, 2), hbar=Fraction(1, 4))
    with pytest.raises(GuardError):
        SpecializationContext(q=Fraction(1), hbar=Fraction(1, 3))
    SpecializationContext(q=Fraction(2, 9), hbar=Fraction(7, 13))


def test_json_order():
    s = TruncatedSeries(2, 3, {(0, 1): 2, (1, 0): Fraction(-1, 3), (0, 0): 1, (2, 0): 5})
    assert [t["exp"] for t in s.to_json()] == [[0, 0], [1, 0], [0, 1], [2, 0]]
    assert s.to_json()[1]["coeff"] == "-1/3"
    assert frac_str(Fraction(4)) == "4/1"


def test_graded_series():
    w = (1, 3)
    g = graded_geometric((1, 0), 2, w, 4, 1, 1)
    assert g.terms[(4, 0)] == 16
    h = graded_geometric((-1, 1), 1, w, 4, 1, -1)
    prod = g * h
    assert prod.terms[(1, 1)] == -4      # 2^2 * (-1)
    assert prod.constant_term() == 1
    with pytest.raises(ValueError):
        graded_geometric((1, -1), 1, w, 4)
    with pytest.raises(ValueError):
        GradedSeries(w, 4, {(1, -1): 1})
    assert abs(g.evaluate([0.1, 0.2]) - sum(0.2 ** k for k in range(5))) < 1e-15
