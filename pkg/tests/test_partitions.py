from collections import deque
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from quiver_vertex.partitions import (
    Partition, Box, column_profile, box_stats, hook, slice_boxes, sigma,
    z_box, z_box_from_zeta, zeta_box, zeta_box_ratio, p_box, shift_vector,
    partitions_up_to, all_partitions)


STAIR = Partition((5, 4, 3, 2))


def test_parse_and_validate():
    assert Partition.parse("5,4,3,2") == STAIR
    assert str(STAIR) == "5,4,3,2"
    for bad in ("", "2,3", "0", "1,x"):
        with pytest.raises(ValueError):
            Partition.parse(bad)


def test_partition_counts():
    assert [len(all_partitions(n)) for n in range(1, 9)] == [1, 2, 3, 5, 7, 11, 15, 22]


def test_column_profile_5432():
    prof = column_profile(STAIR)
    assert (prof.lo, prof.hi) == (-4, 3)
    assert prof.counts == (1, 1, 2, 2, 3, 2, 2, 1)


def test_column_profile_small():
    assert column_profile(Partition([1])) == (0, 0, (1,))
    assert column_profile(Partition([2, 1])) == (-1, 1, (1, 1, 1))


@pytest.mark.parametrize("lam", partitions_up_to(8), ids=str)
def test_profile_matches_boxes(lam):
    prof = column_profile(lam)
    assert sum(prof.counts) == lam.size == len(lam.boxes())
    for b in lam.boxes():
        c, h, a, l = box_stats(lam, b)
        assert 1 <= h <= prof.v(c)
        assert a >= 0 and l >= 0
        assert len(hook(lam, b)) == a + l + 1


def test_box_stats_5432():
    b = STAIR.box_at(0, 1)
    assert b == Box(1, 1)
    assert box_stats(STAIR, b) == (0, 1, 3, 4)
    assert box_stats(Partition([1]), Box(1, 1)) == (0, 1, 0, 0)


def test_box_stats_square():
    # content is row - col, so the box below the corner has content +1
    assert box_stats(Partition([2, 2]), Box(2, 1)) == (1, 1, 0, 1)
    assert box_stats(Partition([2, 2]), Box(1, 2)) == (-1, 1, 1, 0)


def test_box_outside():
    with pytest.raises(ValueError):
        box_stats(Partition([2, 1]), Box(2, 2))
    with pytest.raises(ValueError):
        Partition([2, 1]).box_at(1, 2)


def test_box_addressing():
    lam = Partition([3, 3, 3])
    assert lam.parse_box("0:2") == Box(2, 2)
    assert lam.parse_box("-2:1") == Box(1, 3)
    assert lam.parse_box("2:1") == Box(3, 1)


def test_hook_sizes():
    b = Box(3, 1)
    hs = hook(STAIR, b)
    assert sorted(x.row - x.col for x in hs) == [0, 1, 2, 3]
    assert len(hook(Partition([3, 3, 3]), Box(2, 2))) == 3


def test_zeta_content_zero():
    got = [zeta_box(STAIR, b) for b in STAIR.boxes_of_content(0)]
    # heights 1, 2, 3 -> (hbar/q) zeta_3, (hbar/q)^2 zeta_2, (hbar/q)^3 zeta_0
    assert got == [(3, 1), (2, 2), (0, 3)]
    assert zeta_box(Partition([1]), Box(1, 1)) == (0, 1)
    lam = Partition([3, 2])
    b = lam.box_at(1, 1)
    assert zeta_box(lam, b) == (1 + box_stats(lam, b)[2], 1)


def test_z_box_lower_box():
    m = z_box(STAIR, Box(3, 1))
    assert [m.exponent(i) for i in range(-4, 4)] == [0, 0, 0, 0, 1, 1, 1, 1]
    assert m.hq == 2
    one = z_box(Partition([1]), Box(1, 1))
    assert one.zexp == (1,) and one.hq == 0


def test_z_box_square_relation():
    lam = Partition([2, 2])
    M = np.array([z_box(lam, b).zexp for b in lam.boxes()])
    assert M.shape == (4, 3)
    assert np.linalg.matrix_rank(M) == 3


@pytest.mark.parametrize("lam", partitions_up_to(8), ids=str)
def test_z_box_hook_equals_zeta_form(lam):
    for b in lam.boxes():
        a = z_box(lam, b)
        assert a == z_box_from_zeta(lam, b)
        assert set(a.zexp) <= {0, 1}


@pytest.mark.parametrize("lam", partitions_up_to(8), ids=str)
def test_sigma_sum(lam):
    prof = column_profile(lam)
    # telescoping: v_{lo-1} - v_hi + 1 with v_hi = 1 (the last row's first box)
    assert sum(sigma(lam, i) for i in prof.contents()) == 0
    assert sum(sigma(lam, i) for i in range(prof.lo, prof.hi + 2)) == 1


def test_slice_examples():
    s = slice_boxes(STAIR, STAIR.box_at(1, 1))
    assert sorted(s) == [Box(1, 1), Box(2, 1), Box(3, 1)]
    s = slice_boxes(STAIR, STAIR.box_at(-2, 1))
    assert sorted(s) == [Box(1, j) for j in range(1, 5)]
    assert slice_boxes(Partition([1]), Box(1, 1)) == [Box(1, 1)]
    assert len(slice_boxes(Partition([2, 2]), Box(1, 1))) == 2


@pytest.mark.parametrize("lam", partitions_up_to(8), ids=str)
def test_slices_partition_rectangle(lam):
    prof = column_profile(lam)
    for c in prof.contents():
        C = lam.boxes_of_content(c)
        sl = [set(slice_boxes(lam, b)) for b in C]
        for s in sl:
            assert all(x in lam for x in s)
        union = set().union(*sl)
        assert sum(len(s) for s in sl) == len(union)
        v = prof.v(c)
        assert len(union) == v * (abs(c) + v)


def test_p_box_examples():
    assert p_box(STAIR, Box(1, 1)) == [(2, -1), (3, -1)]
    assert p_box(Partition([1]), Box(1, 1)) == [(0, -1)]
    lam = Partition([2, 2])
    assert all(s == 1 for _, s in p_box(lam, lam.box_at(-1, 1)))


def test_shift_direction():
    # p_0 multiplies zeta_0 by q: z_0 = zeta_{-1}/zeta_0 -> z_0/q, z_1 -> q z_1
    lam = Partition([2, 2])
    assert shift_vector(lam, [(0, 1)]) == (0, -1, 1)


# ----------------------------------------------------------------------
# slice multiplier property, against an independent solver

def _realizing_shift(lam, S):
    """zeta-shift exponents s with s_L - s_R = [b in S] for every box,
    z_b = zeta_L / zeta_R; None if no such shift exists."""
    edges = []
    for b in lam.boxes():
        c, h, a, l = box_stats(lam, b)
        edges.append((c - l - 1, c + a, 1 if b in S else 0))
    adj = {}
    for L, R, w in edges:
        adj.setdefault(L, []).append((R, -w))
        adj.setdefault(R, []).append((L, w))
    pot = {}
    for start in adj:
        if start in pot:
            continue
        pot[start] = 0
        dq = deque([start])
        while dq:
            x = dq.popleft()
            for y, w in adj[x]:
                if y not in pot:
                    pot[y] = pot[x] + w
                    dq.append(y)
                elif pot[y] != pot[x] + w:
                    return None
    return pot


def _multipliers(lam, e):
    return [sum(x * y for x, y in zip(z_box(lam, b).zexp, e)) for b in lam.boxes()]


def _unrealizable(size):
    out = []
    for lam in partitions_up_to(size):
        for b in lam.boxes():
            S = set(slice_boxes(lam, b))
            if _realizing_shift(lam, S) is None:
                out.append((lam.parts, box_stats(lam, b)[:2]))
    return out


@pytest.mark.parametrize("lam", partitions_up_to(8), ids=str)
def test_p_box_realizes_slice_when_possible(lam):
    for b in lam.boxes():
        S = set(slice_boxes(lam, b))
        want = [1 if x in S else 0 for x in lam.boxes()]
        got = _multipliers(lam, shift_vector(lam, p_box(lam, b)))
        if _realizing_shift(lam, S) is not None:
            assert got == want, (lam, b)


def test_smallest_unrealizable_slices():
    assert _unrealizable(5) == []
    assert _unrealizable(6) == [((2, 2, 2), (0, 1)), ((2, 2, 2), (0, 2))]


def test_unrealizable_boxes_size_eight():
    # frozen from the solver: no zeta-shift multiplies exactly the slice by q
    bad = _unrealizable(8)
    assert len(bad) == 20
    assert ((2, 2, 2, 2), (1, 1)) in bad and ((4, 4), (-1, 2)) in bad


def test_zeta_ratio_monomial():
    m = zeta_box_ratio(STAIR, Box(1, 1), Box(2, 2))
    # zeta_3 / zeta_2 = 1/z_3, with (hbar/q)^{1-2}
    assert m.exponent(3) == -1 and m.degree == -1 and m.hq == -1


@given(st.lists(st.integers(1, 4), min_size=1, max_size=4))
def test_conjugate_involution(parts):
    lam = Partition(sorted(parts, reverse=True))
    assert lam.conjugate().conjugate() == lam
    assert lam.conjugate().size == lam.size


def test_monomial_evaluate():
    m = z_box(STAIR, Box(3, 1))
    z = [Fraction(k + 2) for k in range(8)]
    val = m.evaluate(z, Fraction(5, 11), Fraction(3, 7))
    assert val == (Fraction(5, 11) / Fraction(3, 7)) ** 2 * 6 * 7 * 8 * 9
