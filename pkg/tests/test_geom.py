import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from kgg.errors import DegenerateDiameter, DuplicatePoints
from kgg.geom import (
    DiskMembership,
    Ordering,
    TolerancePolicy,
    check_distinct,
    compare_ws,
    disk_membership,
    dist2,
    segments_cross,
    weight_sequence,
)

coord = st.integers(-1000, 1000).map(float)
point = st.tuples(coord, coord)


@pytest.mark.parametrize(
    "p, q, expected",
    [((0, 0), (0, 0), 0), ((0, 0), (3, 4), 25), ((1, 1), (-2, 5), 25)],
)
def test_dist2(p, q, expected):
    assert dist2(p, q) == expected


@pytest.mark.parametrize(
    "r, expected",
    [((1, 0), DiskMembership.INSIDE), ((1, 1), DiskMembership.BOUNDARY), ((3, 3), DiskMembership.OUTSIDE)],
)
def test_disk_membership_examples(r, expected):
    assert disk_membership((0, 0), (2, 0), r) is expected


def test_boundary_counts_as_closed():
    assert DiskMembership.BOUNDARY.in_closed_disk
    assert DiskMembership.INSIDE.in_closed_disk
    assert not DiskMembership.OUTSIDE.in_closed_disk


def test_degenerate_diameter():
    with pytest.raises(DegenerateDiameter):
        disk_membership((1, 1), (1, 1), (0, 0))
    with pytest.raises(DegenerateDiameter):
        disk_membership((0, 0), (1e-10, 0), (5, 5))


def test_tolerance_widens_boundary():
    # d = 1e-6 for this r; strict tau sees Outside, loose tau sees Boundary
    r = (1.0, math.sqrt(1.0 + 0.5e-6))
    assert disk_membership((0, 0), (2, 0), r) is DiskMembership.OUTSIDE
    assert disk_membership((0, 0), (2, 0), r, TolerancePolicy(1e-5)) is DiskMembership.BOUNDARY


def test_policy_from_env(monkeypatch):
    monkeypatch.setenv("KGG_TAU", "1e-6")
    assert TolerancePolicy.from_env().tau == 1e-6
    monkeypatch.delenv("KGG_TAU")
    assert TolerancePolicy.from_env().tau == 1e-9
    with pytest.raises(ValueError):
        TolerancePolicy(-1.0)


def test_check_distinct():
    check_distinct(np.array([[0.0, 0.0], [1e-6, 0.0]]))
    with pytest.raises(DuplicatePoints):
        check_distinct(np.array([[0.0, 0.0], [1.0, 1.0], [0.0, 1e-12]]))


@pytest.mark.parametrize(
    "w1, w2, expected",
    [([3, 1], [3, 2], Ordering.LESS), ([5], [5], Ordering.EQUAL), ([2, 2], [3], Ordering.LESS),
     ([3], [3, 1], Ordering.LESS), ([3, 1], [3], Ordering.GREATER)],
)
def test_compare_ws(w1, w2, expected):
    assert compare_ws(w1, w2) is expected


def test_weight_sequence_sorted_descending():
    assert weight_sequence([1, 3, 2]) == (3.0, 2.0, 1.0)


def test_segments_cross():
    assert segments_cross((0, 0), (2, 2), (0, 2), (2, 0))
    assert not segments_cross((0, 0), (1, 1), (1, 1), (2, 0))  # shared endpoint
    assert not segments_cross((0, 0), (1, 0), (2, 0), (3, 0))  # collinear, disjoint
    assert not segments_cross((0, 0), (2, 0), (1, 0), (1, 1))  # T-junction touches only


@given(point, point, point)
def test_membership_symmetric(a, b, r):
    assume(a != b)
    assert disk_membership(a, b, r) is disk_membership(b, a, r)


@given(point, point, point, point)
def test_membership_translation_invariant(a, b, r, t):
    # integer coordinates keep every sum exact
    assume(a != b)
    shift = lambda p: (p[0] + t[0], p[1] + t[1])  # noqa: E731
    assert disk_membership(a, b, r) is disk_membership(shift(a), shift(b), shift(r))


@given(point, point, point, st.integers(2, 9))
def test_membership_scaling(a, b, r, s):
    assume(a != b)
    pol = TolerancePolicy()
    before = disk_membership(a, b, r, pol)
    scaled = [(p[0] * s, p[1] * s) for p in (a, b, r)]
    after = disk_membership(*scaled, pol)
    if before is not DiskMembership.BOUNDARY:
        assert after is before


ws = st.lists(st.integers(0, 4).map(float), max_size=4).map(lambda w: sorted(w, reverse=True))


@given(ws, ws, ws)
def test_compare_ws_total_order(a, b, c):
    assert compare_ws(a, b) == -compare_ws(b, a)
    assert (compare_ws(a, b) is Ordering.EQUAL) == (a == b)
    if compare_ws(a, b) <= 0 and compare_ws(b, c) <= 0:
        assert compare_ws(a, c) <= 0
