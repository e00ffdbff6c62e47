"""Extremal point configurations and blocking sets.

Each generator checks its own output against the properties it is meant to
exhibit and raises if any fails.  The lattice-based instances use integer
and half-integer coordinates, so every cocircularity they rely on is exact
in floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from kgg.errors import ConstraintViolated, SelfCheckFailed
from kgg.geom import DEFAULT_POLICY, TolerancePolicy, as_points, check_distinct, pairwise_dist2
from kgg.matching import independence_number, matching_number
from kgg.proximity import build_kgg, edge_depth_gg


@dataclass(frozen=True)
class LabeledInstance:
    points: np.ndarray
    labels: dict[str, int] = field(default_factory=dict)
    params: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if len(set(self.labels.values())) != len(self.labels):
            raise ValueError("labels must name distinct points")

    def __getitem__(self, name: str) -> int:
        return self.labels[name]

    @property
    def n(self) -> int:
        return len(self.points)

    def names(self) -> list[str]:
        inv = {i: name for name, i in self.labels.items()}
        return [inv.get(i, "") for i in range(self.n)]


@dataclass(frozen=True)
class BlockerSet:
    points: np.ndarray
    k: int

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class BlockReport:
    blocked: bool
    unblocked: tuple[tuple[int, int], ...]


# -- order-8 counterexample ----------------------------------------------------

COUNTEREXAMPLE_EPS = 0.005
COUNTEREXAMPLE_PHASE_DEG = 10.0


def counterexample_points(eps: float, phase_deg: float) -> tuple[np.ndarray, dict[str, int]]:
    phase = math.radians(phase_deg)
    axis = np.array([math.cos(phase), math.sin(phase)])
    pts = [-0.5 * axis, 0.5 * axis]
    labels = {"a": 0, "b": 1}
    dirs = [np.array([math.cos(math.radians(40 * j)), math.sin(math.radians(40 * j))]) for j in range(1, 10)]
    for j, d in enumerate(dirs, 1):
        labels[f"u{j}"] = len(pts)
        pts.append((0.5 - eps) * d)
    for j, d in enumerate(dirs, 1):
        labels[f"r{j}"] = len(pts)
        pts.append(1.5 * d)
    return np.array(pts), labels


def counterexample_checks(points, labels: dict[str, int], eps: float) -> list[tuple[str, bool, float]]:
    """Every distance constraint of the order-8 configuration as
    ``(name, holds, slack)``; slack is positive when the constraint holds."""
    pts = as_points(points)
    d = np.sqrt(pairwise_dist2(pts))
    target = 1.0 + eps
    a, b = labels["a"], labels["b"]
    r = [labels[f"r{j}"] for j in range(1, 10)]
    u = [labels[f"u{j}"] for j in range(1, 10)]
    out = []
    for j in range(9):
        err = abs(d[r[j], u[j]] - target)
        out.append((f"|r{j + 1}u{j + 1}| = 1+eps", err <= 1e-12 * target, 1e-12 * target - err))
    for j in range(9):
        out.append((f"|r{j + 1}a| > 1+eps", d[r[j], a] > target, d[r[j], a] - target))
        out.append((f"|r{j + 1}b| > 1+eps", d[r[j], b] > target, d[r[j], b] - target))
    for j in range(9):
        for m in range(j + 1, 9):
            out.append((f"|r{j + 1}r{m + 1}| > 1+eps", d[r[j], r[m]] > target, d[r[j], r[m]] - target))
    # u_j is the unique nearest point of r_j; the exchange argument needs it
    for j in range(9):
        others = [v for v in range(len(pts)) if v not in (r[j], u[j])]
        gap = float(d[r[j], others].min() - target)
        out.append((f"r{j + 1} nearest is u{j + 1}", gap > 0, gap))
    return out


def counterexample_eps_max(phase_deg: float = COUNTEREXAMPLE_PHASE_DEG, iters: int = 60) -> float:
    """Supremum of eps for which every constraint holds strictly (bisection)."""

    def ok(eps: float) -> bool:
        pts, labels = counterexample_points(eps, phase_deg)
        return all(h for _, h, _ in counterexample_checks(pts, labels, eps))

    lo, hi = 0.0, 0.5
    if not ok(1e-9):
        return 0.0
    lo = 1e-9
    for _ in range(iters):
        mid = (lo + hi) / 2
        lo, hi = (mid, hi) if ok(mid) else (lo, mid)
    return lo


def gen_counterexample_8gg(eps: float = COUNTEREXAMPLE_EPS, phase_deg: float = COUNTEREXAMPLE_PHASE_DEG) -> LabeledInstance:
    """Twenty points where every Euclidean bottleneck matching uses an edge
    whose diameter disk holds nine other points.

    ``a, b`` at distance 1 about the origin along ``phase_deg``; ``u1..u9`` on
    the radius ``1/2 - eps`` circle and ``r1..r9`` on the radius 1.5 circle,
    ``u_j`` and ``r_j`` both in direction ``40*j`` degrees.
    """
    if not 0 < eps < 0.5:
        raise ConstraintViolated("0 < eps < 1/2", f"eps={eps}")
    pts, labels = counterexample_points(eps, phase_deg)
    for name, holds, slack in counterexample_checks(pts, labels, eps):
        if not holds:
            raise ConstraintViolated(name, f"eps={eps} too large (slack {slack:.3g})")
    return LabeledInstance(pts, labels, {"eps": eps, "phase_deg": phase_deg})


# -- tight order-0 example -----------------------------------------------------

# spine h1 c1 h2 c2 h3 c3 h4 on the x axis, leaves on lattice neighbours
_TIGHT_0GG = [
    ("h1", (0, 0)), ("c1", (1, 0)), ("h2", (2, 0)), ("c2", (3, 0)),
    ("h3", (4, 0)), ("c3", (5, 0)), ("h4", (6, 0)),
    ("l1", (-1, 0)), ("l2", (0, 1)), ("l3", (0, -1)),
    ("l4", (2, 1)), ("l5", (2, -1)),
    ("l6", (4, 1)), ("l7", (4, -1)),
    ("l8", (7, 0)), ("l9", (6, 1)), ("l10", (6, -1)),
]


def is_tree(n: int, edges) -> bool:
    edges = list(edges)
    if len(edges) != n - 1:
        return False
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in edges:
        ri, rj = find(i), find(j)
        if ri == rj:
            return False
        parent[ri] = rj
    return True


def gen_tight_0gg(pol: TolerancePolicy = DEFAULT_POLICY) -> LabeledInstance:
    """17 lattice points whose Gabriel graph is a tree of maximum degree 4
    with maximum matching 4 and independence number 13.

    Every non-adjacent lattice pair has a third point inside or exactly on
    its diameter circle, which is what removes it from the graph.
    """
    pts = np.array([xy for _, xy in _TIGHT_0GG], dtype=float)
    labels = {name: i for i, (name, _) in enumerate(_TIGHT_0GG)}
    g = build_kgg(pts, 0, pol)
    n = len(pts)
    checks = {
        "tree": is_tree(n, g.edges),
        "max degree 4": max(g.degree(v) for v in range(n)) == 4,
        "matching number 4": matching_number(g) == 4,
        "independence number 13": independence_number(g) == 13,
    }
    failed = [k for k, ok in checks.items() if not ok]
    if failed:
        raise SelfCheckFailed(f"tight order-0 instance: {', '.join(failed)}")
    return LabeledInstance(pts, labels)


# -- blocking ------------------------------------------------------------------


def _pp_depths(p: np.ndarray, k_pts: np.ndarray, tau: float) -> np.ndarray:
    allp = np.concatenate([p, k_pts]) if len(k_pts) else p
    n = len(p)
    d2 = pairwise_dist2(allp)
    depth = np.full((n, n), -1, dtype=np.int64)
    for i in range(n - 1):
        js = np.arange(i + 1, n)
        disc = d2[i][None, :] + d2[js, :] - d2[i, js][:, None]
        counted = disc <= tau
        counted[:, i] = False
        counted[np.arange(len(js)), js] = False
        depth[i, js] = counted.sum(axis=1)
    return depth


def verify_blocked(points, blockers, k: int, pol: TolerancePolicy = DEFAULT_POLICY) -> BlockReport:
    """Whether the order-k Gabriel graph of ``points`` plus ``blockers`` has no
    edge between two original points; lists the surviving original edges."""
    p = as_points(points)
    kp = as_points(blockers.points if isinstance(blockers, BlockerSet) else blockers)
    check_distinct(np.concatenate([p, kp]) if len(kp) else p, pol)
    depth = _pp_depths(p, kp, pol.tau)
    iu, ju = np.nonzero((depth >= 0) & (depth <= k))
    bad = tuple(sorted((int(i), int(j)) for i, j in zip(iu, ju)))
    return BlockReport(not bad, bad)


def default_delta(points) -> float:
    p = as_points(points)
    d2 = pairwise_dist2(p)
    np.fill_diagonal(d2, np.inf)
    return 1e-4 * float(np.sqrt(d2.min()))


def blockers_right(points, k: int, delta: float | None = None) -> BlockerSet:
    """``k+1`` points at ``(delta, 0) .. ((k+1) delta, 0)`` right of every point
    except the lexicographically rightmost.

    Pairs sharing an x coordinate are not covered by horizontal offsets;
    check the result with ``verify_blocked``.
    """
    p = as_points(points)
    if len(p) < 2:
        return BlockerSet(np.zeros((0, 2)), k)
    delta = default_delta(p) if delta is None else delta
    if delta <= 0:
        raise ValueError("delta must be positive")
    order = np.lexsort((p[:, 1], p[:, 0]))
    right = int(order[-1])
    if np.array_equal(p[order[-1]], p[order[-2]]):
        raise ValueError("rightmost point is not unique")
    offsets = np.arange(1, k + 2, dtype=float) * delta
    out = [p[i] + np.array([off, 0.0]) for i in range(len(p)) if i != right for off in offsets]
    return BlockerSet(np.array(out), k)


# white squares chained corner to corner; one blocker per square centre
_BLOCKING_SQUARES = 4


def gen_blocking_tight(pol: TolerancePolicy = DEFAULT_POLICY) -> tuple[LabeledInstance, BlockerSet]:
    """13 points (four unit squares sharing corners along a diagonal) whose
    Gabriel graph is blocked by the 4 square centres.

    Each centre lies on the diameter circle of all four sides of its square,
    and the square diagonals are killed by the other two corners.
    """
    corners: list[tuple[int, int]] = []
    for s in range(_BLOCKING_SQUARES):
        for xy in ((s, s), (s + 1, s), (s, s + 1), (s + 1, s + 1)):
            if xy not in corners:
                corners.append(xy)
    pts = np.array(corners, dtype=float)
    labels = {f"p{i + 1}": i for i in range(len(pts))}
    k_pts = np.array([(s + 0.5, s + 0.5) for s in range(_BLOCKING_SQUARES)])
    blockers = BlockerSet(k_pts, 0)
    inst = LabeledInstance(pts, labels)
    n = len(pts)
    if not verify_blocked(pts, blockers, 0, pol).blocked:
        raise SelfCheckFailed("square centres do not block the Gabriel graph")
    if len(blockers) != math.ceil((n - 1) / 3):
        raise SelfCheckFailed(f"{len(blockers)} blockers for n={n}")
    for drop in range(len(k_pts)):
        rest = np.delete(k_pts, drop, axis=0)
        if verify_blocked(pts, rest, 0, pol).blocked:
            raise SelfCheckFailed(f"blocker {drop} is redundant")
    return inst, blockers


def gen_collinear(n: int, spacing: float = 1.0) -> np.ndarray:
    if n < 2 or spacing <= 0:
        raise ValueError("need n >= 2 and positive spacing")
    return np.column_stack([np.arange(n, dtype=float) * spacing, np.zeros(n)])


def counterexample_depth_ab(inst: LabeledInstance, pol: TolerancePolicy = DEFAULT_POLICY) -> int:
    return edge_depth_gg(inst.points, inst["a"], inst["b"], pol)
