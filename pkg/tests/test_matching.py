import itertools
import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kgg.constructions import gen_tight_0gg
from kgg.errors import NoPerfectMatching, OddCardinality, TooLarge
from kgg.matching import (
    Graph,
    Matching,
    bottleneck_matching,
    deficiency,
    deficiency_of,
    enumerate_perfect_matchings,
    has_perfect_matching,
    independence_number,
    lexmin_matching,
    matching_number,
    max_matching,
)
from kgg.proximity import build_kgg

STAR = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])


def random_graph(rng, n, p):
    return Graph.from_edges(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p])


def brute_matching_number(g: Graph) -> int:
    edges = sorted(g.edges)
    best = 0

    def rec(start, used, size):
        nonlocal best
        best = max(best, size)
        for idx in range(start, len(edges)):
            i, j = edges[idx]
            if not (used >> i & 1 or used >> j & 1):
                rec(idx + 1, used | 1 << i | 1 << j, size + 1)

    rec(0, 0, 0)
    return best


def brute_independence(g: Graph) -> int:
    for size in range(g.n, 0, -1):
        for sub in itertools.combinations(range(g.n), size):
            s = set(sub)
            if not any(i in s and j in s for i, j in g.edges):
                return size
    return 0


def test_small_matchings():
    assert matching_number(Graph.from_edges(3, [(0, 1), (1, 2)])) == 1
    assert matching_number(STAR) == 1
    assert matching_number(Graph.complete(5)) == 2
    assert matching_number(Graph(0, frozenset())) == 0


def test_odd_cycle_blossom():
    # two triangles joined by a path: needs blossom contraction to reach size 4
    g = Graph.from_edges(8, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 5)])
    m = max_matching(g)
    assert m.size == 4 and len(m.vertices()) == 8


def test_tight_instance_matching():
    inst = gen_tight_0gg()
    assert matching_number(build_kgg(inst.points, 0)) == 4


def test_matching_is_valid_and_in_graph(rng):
    for _ in range(50):
        g = random_graph(rng, int(rng.integers(1, 20)), rng.random())
        m = max_matching(g)
        assert all(e in g.edges for e in m.pairs)
        assert len(m.vertices()) == 2 * m.size


def test_against_brute_force(rng):
    for _ in range(200):
        g = random_graph(rng, int(rng.integers(1, 11)), rng.random())
        assert matching_number(g) == brute_matching_number(g)


def test_against_networkx(rng):
    for _ in range(200):
        n = int(rng.integers(1, 40))
        g = random_graph(rng, n, rng.random() * 0.3)
        h = nx.Graph()
        h.add_nodes_from(range(n))
        h.add_edges_from(g.edges)
        assert matching_number(g) == len(nx.max_weight_matching(h, maxcardinality=True))


def test_perfect_matching_examples():
    assert has_perfect_matching(Graph.from_edges(2, [(0, 1)]), cross_check=True)
    assert not has_perfect_matching(STAR, cross_check=True)
    assert not has_perfect_matching(Graph.complete(3))


def test_deficiency_examples():
    k4 = deficiency(Graph.complete(4))
    assert k4.deficiency == 0 and k4.witness == frozenset()
    star = deficiency(STAR)
    assert star.deficiency == 2 and star.witness == frozenset({0})
    assert deficiency_of(STAR, [0]) == 2
    with pytest.raises(TooLarge):
        deficiency(Graph.complete(17))


def test_tutte_berge_identity(rng):
    for _ in range(100):
        n = int(rng.integers(1, 13))
        g = random_graph(rng, n, rng.random())
        rep = deficiency(g)
        assert matching_number(g) == (n - rep.deficiency) // 2
        assert deficiency_of(g, rep.witness) == rep.deficiency
        has_perfect_matching(g, cross_check=True)


def test_bottleneck_examples(unit_square):
    assert bottleneck_matching([(0, 0), (3, 4)]).bottleneck == 5.0
    m = bottleneck_matching(unit_square)
    assert m.bottleneck == 1.0 and m.ws == (1.0, 1.0)
    with pytest.raises(OddCardinality):
        bottleneck_matching([(0, 0), (1, 0), (2, 0)])
    with pytest.raises(NoPerfectMatching):
        bottleneck_matching(unit_square, edges=[(0, 1), (0, 2), (0, 3)])


def test_bottleneck_forbid(unit_square):
    m = bottleneck_matching(unit_square, forbid=(0, 1))
    assert (0, 1) not in m and m.bottleneck == 1.0
    m = bottleneck_matching(unit_square, edges=[(0, 1), (2, 3), (0, 2), (1, 3)], forbid=(1, 0))
    assert m.bottleneck == pytest.approx(math.sqrt(2))


def test_bottleneck_optimal_vs_enumeration(rng):
    for _ in range(60):
        n = 2 * int(rng.integers(1, 6))
        pts = rng.random((n, 2))
        best = min(
            max(math.dist(pts[i], pts[j]) for i, j in pm) for pm in enumerate_perfect_matchings(n)
        )
        assert bottleneck_matching(pts).bottleneck == pytest.approx(best, rel=1e-12)


def test_enumeration_counts():
    assert [sum(1 for _ in enumerate_perfect_matchings(n)) for n in (0, 2, 4, 8)] == [1, 1, 3, 105]
    assert sum(1 for _ in enumerate_perfect_matchings(4, [(0, 1), (2, 3), (0, 2)])) == 1
    with pytest.raises(TooLarge):
        next(enumerate_perfect_matchings(16))
    assert list(enumerate_perfect_matchings(5)) == []


def test_enumeration_unique():
    seen = [frozenset(pm) for pm in enumerate_perfect_matchings(8)]
    assert len(seen) == len(set(seen))


def test_lexmin_examples(unit_square):
    assert lexmin_matching([(0, 0), (1, 1)]).pairs == ((0, 1),)
    assert lexmin_matching(unit_square).ws == (1.0, 1.0)
    with pytest.raises(TooLarge):
        lexmin_matching(np.random.default_rng(0).random((16, 2)))


def test_lexmin_vs_enumeration(rng):
    for _ in range(40):
        n = 2 * int(rng.integers(1, 5))
        pts = rng.random((n, 2))
        want = min(
            tuple(sorted((math.dist(pts[i], pts[j]) for i, j in pm), reverse=True))
            for pm in enumerate_perfect_matchings(n)
        )
        got = lexmin_matching(pts)
        assert got.ws == pytest.approx(want, rel=1e-12)
        assert got.bottleneck == pytest.approx(bottleneck_matching(pts).bottleneck, rel=1e-12)


def test_independence(rng):
    assert independence_number(Graph(5, frozenset())) == 5
    assert independence_number(Graph.complete(6)) == 1
    assert independence_number(build_kgg(gen_tight_0gg().points, 0)) == 13
    for _ in range(60):
        g = random_graph(rng, int(rng.integers(1, 12)), rng.random())
        alpha = independence_number(g)
        assert alpha == brute_independence(g)
        assert alpha <= g.n - matching_number(g)
    with pytest.raises(TooLarge):
        independence_number(Graph.complete(21))


def test_matching_from_pairs():
    m = Matching.from_pairs([(1, 0), (3, 2)], [(0, 0), (3, 4), (0, 0.5), (0, 1)])
    assert m.pairs == ((0, 1), (2, 3)) and m.ws == (5.0, 0.5)
    with pytest.raises(ValueError):
        Matching.from_pairs([(0, 1), (1, 2)])


@given(st.integers(0, 10_000), st.integers(1, 5))
def test_threshold_feasibility_monotone(seed, half):
    pts = np.random.default_rng(seed).random((2 * half, 2))
    d2 = sorted({float(((pts[i] - pts[j]) ** 2).sum()) for i, j in itertools.combinations(range(2 * half), 2)})
    feasible = [
        has_perfect_matching(
            Graph.from_edges(2 * half, [(i, j) for i, j in itertools.combinations(range(2 * half), 2)
                                        if ((pts[i] - pts[j]) ** 2).sum() <= t])
        )
        for t in d2
    ]
    first = feasible.index(True)
    assert all(feasible[first:])
    assert bottleneck_matching(pts).bottleneck == pytest.approx(math.sqrt(d2[first]), rel=1e-12)


@given(st.integers(0, 10_000), st.integers(3, 10))
def test_mst_cycle_bound(seed, n):
    """On any cycle through a tree edge e, some non-tree edge weighs at least w(e)."""
    rng = np.random.default_rng(seed)
    h = nx.gnp_random_graph(n, 0.6, seed=seed)
    for u, v in h.edges:
        h[u][v]["weight"] = float(rng.random())
    for comp in nx.connected_components(h):
        sub = h.subgraph(comp)
        tree = nx.minimum_spanning_tree(sub)
        for u, v in tree.edges:
            w = sub[u][v]["weight"]
            for cycle in nx.simple_cycles(sub.to_directed(), length_bound=6):
                if len(cycle) < 3:
                    continue
                cyc = list(zip(cycle, cycle[1:] + cycle[:1]))
                if not any({a, b} == {u, v} for a, b in cyc):
                    continue
                non_tree = [sub[a][b]["weight"] for a, b in cyc if not tree.has_edge(a, b)]
                assert non_tree and max(non_tree) >= w
