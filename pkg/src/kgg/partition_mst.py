"""Partition graphs, their minimum spanning trees and the disk systems built
on the realising point pairs.

Given a partition of (a subset of) the points into classes, the class
graph is complete with weight ``min |ab|`` over cross pairs.  Its MST picks
one realising point pair per tree edge; the closed diameter disks of those
pairs form the disk system whose plane depth never exceeds three.

Ties are broken lexicographically on ``(squared length, witness pair)``
everywhere, so the same rule yields a reproducible Euclidean MST.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from kgg.errors import EmptyClass
from kgg.geom import DEFAULT_POLICY, TolerancePolicy, as_points, pairwise_dist2, segments_cross

Edge = tuple[int, int]


@dataclass(frozen=True)
class Partition:
    classes: tuple[frozenset[int], ...]

    def __post_init__(self):
        seen: set[int] = set()
        for idx, cls in enumerate(self.classes):
            if not cls:
                raise EmptyClass(f"class {idx} is empty")
            if seen & cls:
                raise ValueError(f"class {idx} overlaps an earlier class")
            seen |= cls

    @classmethod
    def of(cls, classes: Iterable[Iterable[int]]) -> "Partition":
        return cls(tuple(frozenset(int(v) for v in c) for c in classes))

    @classmethod
    def from_labels(cls, labels: Sequence[int], ground: Optional[Sequence[int]] = None) -> "Partition":
        """Group ``ground`` (default ``range(len(labels))``) by label, in first-seen label order."""
        ground = range(len(labels)) if ground is None else ground
        groups: dict[int, list[int]] = {}
        for v, lab in zip(ground, labels):
            groups.setdefault(int(lab), []).append(int(v))
        return cls.of(groups.values())

    @classmethod
    def singletons(cls, ground: Iterable[int]) -> "Partition":
        return cls.of([v] for v in ground)

    @property
    def ground(self) -> frozenset[int]:
        return frozenset().union(*self.classes)

    def label_map(self) -> dict[int, int]:
        return {v: c for c, members in enumerate(self.classes) for v in members}


@dataclass(frozen=True)
class ClassEdge:
    ci: int
    cj: int
    length2: float
    witness: Edge


@dataclass(frozen=True)
class PartitionGraph:
    n_classes: int
    edges: tuple[ClassEdge, ...]


@dataclass(frozen=True)
class WitnessTree:
    edges: tuple[Edge, ...]
    class_edges: tuple[tuple[int, int], ...]
    lengths: tuple[float, ...]


@dataclass(frozen=True)
class DiskSystem:
    centers: np.ndarray  # (m, 2)
    radius2: np.ndarray  # (m,)
    witnesses: tuple[Edge, ...]

    def __len__(self) -> int:
        return len(self.witnesses)


def _sorted_pairs(pts: np.ndarray, ground: Sequence[int]):
    g = np.asarray(sorted(ground), dtype=np.int64)
    if len(g) < 2:
        return [], None
    d2 = pairwise_dist2(pts)
    iu, ju = np.triu_indices(len(g), 1)
    a, b = g[iu], g[ju]
    w = d2[a, b]
    order = np.lexsort((b, a, w))
    return list(zip(w[order].tolist(), a[order].tolist(), b[order].tolist())), d2


def partition_graph(points, partition: Partition) -> PartitionGraph:
    """Complete class graph with exact nearest cross distances and the
    lexicographically first realising pair for each class pair."""
    pts = as_points(points)
    labels = partition.label_map()
    pairs, _ = _sorted_pairs(pts, list(labels))
    m = len(partition.classes)
    found: dict[tuple[int, int], ClassEdge] = {}
    need = m * (m - 1) // 2
    for w, a, b in pairs:
        ca, cb = labels[a], labels[b]
        if ca == cb:
            continue
        key = (min(ca, cb), max(ca, cb))
        if key not in found:
            found[key] = ClassEdge(key[0], key[1], w, (a, b))
            if len(found) == need:
                break
    edges = tuple(sorted(found.values(), key=lambda e: (e.length2, e.witness)))
    return PartitionGraph(m, edges)


class _DisjointSet:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        self.parent[rx] = ry
        return True


def mst_witness(pg: PartitionGraph) -> WitnessTree:
    """Kruskal on the class graph; returns the realising point pairs."""
    dsu = _DisjointSet(pg.n_classes)
    chosen: list[ClassEdge] = []
    for e in sorted(pg.edges, key=lambda e: (e.length2, e.witness)):
        if dsu.union(e.ci, e.cj):
            chosen.append(e)
            if len(chosen) == pg.n_classes - 1:
                break
    return WitnessTree(
        edges=tuple(e.witness for e in chosen),
        class_edges=tuple((e.ci, e.cj) for e in chosen),
        lengths=tuple(float(np.sqrt(e.length2)) for e in chosen),
    )


def witness_tree(points, partition: Partition) -> WitnessTree:
    """Same tree as ``mst_witness(partition_graph(...))`` in one sorted scan.

    Scanning point pairs by ``(length, pair)`` and uniting classes the first
    time a pair bridges two components is Kruskal on the class graph.
    """
    pts = as_points(points)
    labels = partition.label_map()
    pairs, _ = _sorted_pairs(pts, list(labels))
    m = len(partition.classes)
    dsu = _DisjointSet(m)
    edges, class_edges, lengths = [], [], []
    for w, a, b in pairs:
        if len(edges) == m - 1:
            break
        ca, cb = labels[a], labels[b]
        if ca != cb and dsu.union(ca, cb):
            edges.append((a, b))
            class_edges.append((min(ca, cb), max(ca, cb)))
            lengths.append(float(np.sqrt(w)))
    return WitnessTree(tuple(edges), tuple(class_edges), tuple(lengths))


def emst(points) -> list[Edge]:
    """Euclidean MST with ``(length, pair)`` tie-breaking."""
    pts = as_points(points)
    return list(witness_tree(pts, Partition.singletons(range(len(pts)))).edges)


def disk_system(points, tree: WitnessTree | Iterable[Edge]) -> DiskSystem:
    pts = as_points(points)
    edges = tuple(tree.edges if isinstance(tree, WitnessTree) else (tuple(e) for e in tree))
    if not edges:
        return DiskSystem(np.zeros((0, 2)), np.zeros(0), ())
    a = pts[[e[0] for e in edges]]
    b = pts[[e[1] for e in edges]]
    centers = (a + b) / 2.0
    radius2 = np.einsum("ij,ij->i", a - b, a - b) / 4.0
    return DiskSystem(centers, radius2, edges)


def _containment(ds: DiskSystem, q: np.ndarray, tau: float) -> np.ndarray:
    """Boolean (len(q), len(ds)) closed containment; tolerance matches the
    diameter-disk discriminant, which is twice ``|q-c|^2 - R^2``."""
    diff = q[:, None, :] - ds.centers[None, :, :]
    power = np.einsum("ijk,ijk->ij", diff, diff) - ds.radius2[None, :]
    return 2.0 * power <= tau


def circle_intersections(ds: DiskSystem, tau: float = DEFAULT_POLICY.tau) -> np.ndarray:
    """All pairwise boundary intersection points; tangencies give one point."""
    m = len(ds)
    if m < 2:
        return np.zeros((0, 2))
    i, j = np.triu_indices(m, 1)
    c1, c2 = ds.centers[i], ds.centers[j]
    r1s, r2s = ds.radius2[i], ds.radius2[j]
    delta = c2 - c1
    d2 = np.einsum("ij,ij->i", delta, delta)
    ok = d2 > 0
    c1, delta, d2, r1s, r2s = c1[ok], delta[ok], d2[ok], r1s[ok], r2s[ok]
    d = np.sqrt(d2)
    along = (d2 + r1s - r2s) / (2.0 * d)
    h2 = r1s - along * along
    touch = h2 >= -tau
    h = np.sqrt(np.clip(h2[touch], 0.0, None))
    unit = delta[touch] / d[touch, None]
    perp = np.stack([-unit[:, 1], unit[:, 0]], axis=1)
    base = c1[touch] + along[touch, None] * unit
    return np.concatenate([base + h[:, None] * perp, base - h[:, None] * perp])


def _punctured_depth(ds: DiskSystem, x: np.ndarray, tau: float) -> int:
    """Depth just next to ``x``, maximised over approach directions.

    Disks holding ``x`` strictly keep it nearby; a disk whose circle passes
    through ``x`` holds ``x + s v`` for small s > 0 iff v points into it.
    """
    diff = ds.centers - x
    power = 2.0 * (np.einsum("ij,ij->i", diff, diff) - ds.radius2)
    strict = int(np.count_nonzero(power < -tau))
    on = np.abs(power) <= tau
    if not np.any(on):
        return strict
    theta = np.arctan2(diff[on, 1], diff[on, 0])
    crit = np.sort(np.mod(np.concatenate([theta + np.pi / 2, theta - np.pi / 2]), 2 * np.pi))
    mids = (crit + np.roll(crit, -1) + np.where(np.arange(len(crit)) == len(crit) - 1, 2 * np.pi, 0)) / 2
    cosines = np.cos(mids[:, None] - theta[None, :])
    return strict + int((cosines > 1e-12).sum(axis=1).max())


def max_depth(
    ds: DiskSystem, queries=None, pol: TolerancePolicy = DEFAULT_POLICY, exclude=None
) -> tuple[int, Optional[tuple[float, float]]]:
    """Largest number of closed disks sharing a point.

    With ``queries`` the maximum is over those points only.  Otherwise it is
    over the whole plane, evaluated at every centre and every pairwise circle
    intersection (the deepest cell of a disk arrangement always contains one).

    ``exclude`` removes points (typically the ground set the disks were built
    on) from the domain.  A closed diameter disk contains its own endpoints,
    so a tree vertex of degree d sits in d disks; with ``exclude`` such a
    candidate is replaced by the depth of its punctured neighbourhood.
    """
    if queries is not None:
        cand = as_points(queries)
    else:
        cand = np.concatenate([ds.centers, circle_intersections(ds, pol.tau)])
    if len(ds) == 0 or len(cand) == 0:
        return 0, None
    counts = _containment(ds, cand, pol.tau).sum(axis=1)
    if exclude is not None and len(as_points(exclude)):
        ex = as_points(exclude)
        diff = cand[:, None, :] - ex[None, :, :]
        hit = (np.einsum("ijk,ijk->ij", diff, diff) <= pol.tau * pol.tau).any(axis=1)
        for c in np.nonzero(hit)[0]:
            counts[c] = _punctured_depth(ds, cand[c], pol.tau)
    k = int(np.argmax(counts))
    return int(counts[k]), (float(cand[k, 0]), float(cand[k, 1]))


def center_exclusion_check(ds: DiskSystem, pol: TolerancePolicy = DEFAULT_POLICY) -> bool:
    """True iff no disk contains (closed) the centre of another disk."""
    if len(ds) < 2:
        return True
    inside = _containment(ds, ds.centers, pol.tau)
    np.fill_diagonal(inside, False)
    return not bool(inside.any())


def disk_intruders(points, ds: DiskSystem, ground: Optional[Iterable[int]] = None,
                   pol: TolerancePolicy = DEFAULT_POLICY) -> list[tuple[int, int]]:
    """(disk index, point index) pairs where a ground point other than the
    disk's own witnesses lies in the closed disk."""
    pts = as_points(points)
    idx = np.arange(len(pts)) if ground is None else np.asarray(sorted(ground), dtype=np.int64)
    if len(ds) == 0 or len(idx) == 0:
        return []
    inside = _containment(ds, pts[idx], pol.tau)
    bad = []
    for qi, di in zip(*np.nonzero(inside)):
        v = int(idx[qi])
        if v not in ds.witnesses[di]:
            bad.append((int(di), v))
    return bad


def crossing_pairs(points, edges: Sequence[Edge]) -> list[tuple[Edge, Edge]]:
    """Pairs of segments that properly cross."""
    pts = as_points(points)
    out = []
    for e, f in _candidate_pairs(pts, edges):
        if segments_cross(pts[e[0]], pts[e[1]], pts[f[0]], pts[f[1]]):
            out.append((e, f))
    return out


def _candidate_pairs(pts: np.ndarray, edges: Sequence[Edge]):
    # bounding-box prefilter
    edges = list(edges)
    if len(edges) < 2:
        return
    a = pts[[e[0] for e in edges]]
    b = pts[[e[1] for e in edges]]
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    overlap = (
        (lo[:, None, 0] <= hi[None, :, 0])
        & (lo[None, :, 0] <= hi[:, None, 0])
        & (lo[:, None, 1] <= hi[None, :, 1])
        & (lo[None, :, 1] <= hi[:, None, 1])
    )
    for i, j in zip(*np.nonzero(np.triu(overlap, 1))):
        yield edges[i], edges[j]
