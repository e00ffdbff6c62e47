import math

import numpy as np
import pytest

from kgg.constructions import (
    COUNTEREXAMPLE_EPS,
    blockers_right,
    counterexample_checks,
    counterexample_eps_max,
    default_delta,
    gen_blocking_tight,
    gen_collinear,
    gen_counterexample_8gg,
    gen_tight_0gg,
    is_tree,
    verify_blocked,
)
from kgg.errors import ConstraintViolated
from kgg.matching import bottleneck_matching, independence_number, matching_number
from kgg.partition_mst import disk_intruders, disk_system, emst
from kgg.proximity import build_kgg, edge_depth_gg


@pytest.fixture(scope="module")
def ce():
    return gen_counterexample_8gg(COUNTEREXAMPLE_EPS)


def test_counterexample_layout(ce):
    assert ce.n == 20 and len(ce.labels) == 20
    a, b = ce.points[ce["a"]], ce.points[ce["b"]]
    assert math.dist(a, b) == pytest.approx(1.0, abs=1e-15)
    for j in range(1, 10):
        u, r = ce.points[ce[f"u{j}"]], ce.points[ce[f"r{j}"]]
        assert np.linalg.norm(u) == pytest.approx(0.5 - COUNTEREXAMPLE_EPS, abs=1e-15)
        assert np.linalg.norm(r) == pytest.approx(1.5, abs=1e-15)
        assert math.dist(u, r) == pytest.approx(1 + COUNTEREXAMPLE_EPS, rel=1e-12)


def test_counterexample_constraints(ce):
    checks = counterexample_checks(ce.points, ce.labels, COUNTEREXAMPLE_EPS)
    assert all(h for _, h, _ in checks)
    names = [name for name, _, _ in checks]
    assert sum("= 1+eps" in s for s in names) == 9
    assert sum(s.endswith("a| > 1+eps") or s.endswith("b| > 1+eps") for s in names) == 18
    assert sum(s.count("r") == 2 and "> 1+eps" in s for s in names) == 36


def test_counterexample_depth_and_graphs(ce):
    assert edge_depth_gg(ce.points, ce["a"], ce["b"]) == 9
    assert (ce["a"], ce["b"]) not in build_kgg(ce.points, 8).edges
    assert (ce["a"], ce["b"]) in build_kgg(ce.points, 9).edges


def test_counterexample_bottleneck(ce):
    ab = (ce["a"], ce["b"])
    m = bottleneck_matching(ce.points)
    assert m.bottleneck == pytest.approx(1 + COUNTEREXAMPLE_EPS, rel=1e-12)
    assert ab in m
    assert bottleneck_matching(ce.points, forbid=ab).bottleneck > 1 + COUNTEREXAMPLE_EPS


def test_counterexample_eps_range():
    eps_max = counterexample_eps_max()
    assert 0.005 < eps_max < 0.05
    gen_counterexample_8gg(0.99 * eps_max)
    with pytest.raises(ConstraintViolated):
        gen_counterexample_8gg(1.01 * eps_max)
    with pytest.raises(ConstraintViolated):
        gen_counterexample_8gg(0.0)


def test_tight_0gg():
    inst = gen_tight_0gg()
    g = build_kgg(inst.points, 0)
    assert inst.n == 17 and len(g.edges) == 16 and is_tree(17, g.edges)
    assert max(g.degree(v) for v in range(17)) == 4
    assert matching_number(g) == 4 == (17 - 1) // 4
    assert independence_number(g) == 13 == (3 * 17 + 1) // 4


def test_tight_0gg_boundary_kills():
    # every non-tree pair at lattice distance sqrt(2) or 2 is killed by a boundary point
    inst = gen_tight_0gg()
    g = build_kgg(inst.points, 0)
    killed = [e for e, d in g.depth.items() if d >= 1 and math.dist(*inst.points[list(e)]) <= 2.0]
    assert killed


def test_blocking_tight():
    inst, blk = gen_blocking_tight()
    assert inst.n == 13 and len(blk) == 4 == math.ceil((13 - 1) / 3)
    assert verify_blocked(inst.points, blk, 0).blocked
    for drop in range(4):
        rep = verify_blocked(inst.points, np.delete(blk.points, drop, axis=0), 0)
        assert not rep.blocked and rep.unblocked


def test_verify_blocked_empty():
    rep = verify_blocked([(0, 0), (1, 0), (3, 1)], np.zeros((0, 2)), 0)
    assert not rep.blocked and (0, 1) in rep.unblocked


def test_verify_blocked_matches_direct_build(rng):
    for _ in range(20):
        n, m, k = int(rng.integers(2, 12)), int(rng.integers(0, 10)), int(rng.integers(0, 3))
        p, kp = rng.random((n, 2)), rng.random((m, 2))
        g = build_kgg(np.concatenate([p, kp]), k)
        want = tuple(sorted(e for e in g.edges if e[1] < n))
        assert verify_blocked(p, kp, k).unblocked == want


def test_blockers_right_small():
    blk = blockers_right([(0, 0), (1, 0)], 0)
    assert len(blk) == 1 and verify_blocked([(0, 0), (1, 0)], blk, 0).blocked


def test_blockers_right_random(rng):
    pts = rng.random((20, 2))
    blk = blockers_right(pts, 1, default_delta(pts))
    assert len(blk) == 2 * 19
    assert verify_blocked(pts, blk, 1).blocked


def test_collinear_each_disk_needs_k_plus_one():
    pts = gen_collinear(5)
    blk = blockers_right(pts, 2)
    assert len(blk) == 12 and verify_blocked(pts, blk, 2).blocked
    for drop in range(12):
        assert not verify_blocked(pts, np.delete(blk.points, drop, axis=0), 2).blocked


def test_collinear_basics():
    assert build_kgg(gen_collinear(3), 0).sorted_edges() == [(0, 1), (1, 2)]
    pts = gen_collinear(4, 0.5)
    assert emst(pts) == [(0, 1), (1, 2), (2, 3)]
    assert not disk_intruders(pts, disk_system(pts, emst(pts)))
    with pytest.raises(ValueError):
        gen_collinear(1)


def test_collinear_needs_n_minus_one_blockers(rng):
    # disjoint MST disks: any three blockers leave one of the four gaps open
    pts = gen_collinear(5)
    for _ in range(200):
        kp = rng.uniform(-0.5, 4.5, (3, 2)) * [1, 0.6]
        assert not verify_blocked(pts, kp, 0).blocked
