"""Order-k proximity graphs (Gabriel, relative neighbourhood, Delaunay) built
by direct predicate counting.

Every builder first computes an integer *depth* for each unordered pair,
the number of other points that count against the edge; the order-k graph
keeps the pairs of depth at most k.  Building the depth matrix once and
thresholding it is the cheap way to get a whole range of orders.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from kgg.geom import (
    DEFAULT_POLICY,
    TolerancePolicy,
    as_points,
    check_distinct,
    disk_membership,
    pairwise_dist2,
)


class Family(str, enum.Enum):
    GG = "GG"
    RNG = "RNG"
    DG = "DG"


Edge = tuple[int, int]


def _key(i: int, j: int) -> Edge:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True, eq=False)
class ProximityGraph:
    n: int
    family: Family
    order: int
    edges: frozenset[Edge]
    depth: dict[Edge, int] = field(repr=False)

    def __post_init__(self):
        for i, j in self.edges:
            if not (0 <= i < j < self.n):
                raise ValueError(f"edge {(i, j)} is not a valid ordered index pair for n={self.n}")

    def has_edge(self, i: int, j: int) -> bool:
        return _key(i, j) in self.edges

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in sorted(self.edges):
            adj[i].append(j)
            adj[j].append(i)
        return adj

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.sorted_edges())


def edge_depth_gg(points, i: int, j: int, pol: TolerancePolicy = DEFAULT_POLICY) -> int:
    """Number of other points in the closed disk with diameter ``p_i p_j``."""
    if i == j:
        raise ValueError("an edge needs two distinct endpoints")
    pts = as_points(points)
    a, b = pts[i], pts[j]
    return sum(
        1
        for r in range(len(pts))
        if r != i and r != j and disk_membership(a, b, pts[r], pol).in_closed_disk
    )


def _prepare(points, pol: TolerancePolicy) -> np.ndarray:
    pts = as_points(points)
    if len(pts) < 2:
        raise ValueError("need at least two points")
    check_distinct(pts, pol)
    return pts


def _symmetric(depth: np.ndarray) -> np.ndarray:
    iu = np.triu_indices(len(depth), 1)
    depth[(iu[1], iu[0])] = depth[iu]
    np.fill_diagonal(depth, -1)
    return depth


def gg_depths(points, pol: TolerancePolicy = DEFAULT_POLICY) -> np.ndarray:
    """Symmetric matrix of closed diameter-disk counts (diagonal is -1)."""
    pts = _prepare(points, pol)
    n = len(pts)
    d2 = pairwise_dist2(pts)
    depth = np.zeros((n, n), dtype=np.int64)
    idx = np.arange(n)
    for i in range(n - 1):
        js = idx[i + 1:]
        disc = d2[i][None, :] + d2[js, :] - d2[i, js][:, None]
        counted = disc <= pol.tau
        counted[:, i] = False
        counted[np.arange(len(js)), js] = False
        depth[i, js] = counted.sum(axis=1)
    return _symmetric(depth)


def rng_depths(points, pol: TolerancePolicy = DEFAULT_POLICY) -> np.ndarray:
    """Symmetric matrix of open-lune counts (diagonal is -1)."""
    pts = _prepare(points, pol)
    n = len(pts)
    d2 = pairwise_dist2(pts)
    depth = np.zeros((n, n), dtype=np.int64)
    idx = np.arange(n)
    for i in range(n - 1):
        js = idx[i + 1:]
        far = np.maximum(d2[i][None, :], d2[js, :])
        counted = far < d2[i, js][:, None] - pol.tau
        counted[:, i] = False
        counted[np.arange(len(js)), js] = False
        depth[i, js] = counted.sum(axis=1)
    return _symmetric(depth)


def _dg_pair_depth(pts: np.ndarray, d2: np.ndarray, i: int, j: int, tau: float, closed: bool = False) -> int:
    # Circle centres through p_i, p_j are m + t*w, w perpendicular to p_j - p_i.
    # Scaled power of r against that circle: A_r + B_r*t, with A_r the diameter
    # disk discriminant (t = 0) and B_r = -4 * orient(p_i, p_j, r).
    p, q = pts[i], pts[j]
    mask = np.ones(len(pts), dtype=bool)
    mask[[i, j]] = False
    others = pts[mask]
    a = d2[i, mask] + d2[j, mask] - d2[i, j]
    orient = (q[0] - p[0]) * (others[:, 1] - p[1]) - (q[1] - p[1]) * (others[:, 0] - p[0])
    b = -4.0 * orient
    # counted iff power < -tau (open) or power <= tau (closed)
    thr = tau if closed else -tau

    def count(power):
        return power <= thr if closed else power < thr

    moving = b != 0
    if not np.any(moving):
        return int(np.count_nonzero(count(a)))
    brk = np.unique((thr - a[moving]) / b[moving])
    lo, hi = brk[0], brk[-1]
    cand = np.concatenate(
        [
            brk,
            (brk[:-1] + brk[1:]) / 2.0,
            [lo - max(1.0, abs(lo)), hi + max(1.0, abs(hi)), 0.0],
        ]
    )
    inside = count(a[None, :] + b[None, :] * cand[:, None])
    return int(inside.sum(axis=1).min())


def dg_depths(points, pol: TolerancePolicy = DEFAULT_POLICY, closed: bool = False) -> np.ndarray:
    """Symmetric matrix of the minimum open-interior count over all circles
    through each pair (diagonal is -1).

    ``closed=True`` counts points on the circle as well; the graphs use the
    open count, the closed one exists to find instances where the two differ.
    """
    pts = _prepare(points, pol)
    n = len(pts)
    d2 = pairwise_dist2(pts)
    depth = np.zeros((n, n), dtype=np.int64)
    for i in range(n - 1):
        for j in range(i + 1, n):
            depth[i, j] = _dg_pair_depth(pts, d2, i, j, pol.tau, closed)
    return _symmetric(depth)


_DEPTHS = {Family.GG: gg_depths, Family.RNG: rng_depths, Family.DG: dg_depths}


def depths(points, family: Family | str, pol: TolerancePolicy = DEFAULT_POLICY) -> np.ndarray:
    return _DEPTHS[Family(family)](points, pol)


def graph_from_depths(depth: np.ndarray, k: int, family: Family | str) -> ProximityGraph:
    if k < 0:
        raise ValueError(f"order must be non-negative, got {k}")
    n = len(depth)
    iu, ju = np.triu_indices(n, 1)
    dmap = {(int(i), int(j)): int(depth[i, j]) for i, j in zip(iu, ju)}
    edges = frozenset(e for e, d in dmap.items() if d <= k)
    return ProximityGraph(n=n, family=Family(family), order=k, edges=edges, depth=dmap)


def build(points, family: Family | str, k: int, pol: TolerancePolicy = DEFAULT_POLICY) -> ProximityGraph:
    if k < 0:
        raise ValueError(f"order must be non-negative, got {k}")
    return graph_from_depths(depths(points, family, pol), k, family)


def build_kgg(points, k: int, pol: TolerancePolicy = DEFAULT_POLICY) -> ProximityGraph:
    return build(points, Family.GG, k, pol)


def build_krng(points, k: int, pol: TolerancePolicy = DEFAULT_POLICY) -> ProximityGraph:
    return build(points, Family.RNG, k, pol)


def build_kdg(points, k: int, pol: TolerancePolicy = DEFAULT_POLICY) -> ProximityGraph:
    return build(points, Family.DG, k, pol)

