"""Seeded randomized trial runner for the matching, disk-depth and blocking
properties.

Every trial draws its instance from its own generator, seeded from
``(seed, trial index)`` through ``numpy.random.SeedSequence`` and PCG64, so
any single trial can be replayed in isolation and reports are identical
byte for byte across runs and worker counts.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import partial
from typing import Callable, Optional

import numpy as np

from kgg import constructions as cons
from kgg import io
from kgg.errors import DuplicatePoints
from kgg.geom import TolerancePolicy, check_distinct
from kgg.matching import (
    Graph,
    bottleneck_matching,
    deficiency,
    deficiency_of,
    independence_number,
    lexmin_matching,
    matching_number,
)
from kgg.partition_mst import (
    Partition,
    center_exclusion_check,
    crossing_pairs,
    disk_intruders,
    disk_system,
    emst,
    max_depth,
    witness_tree,
)
from kgg.proximity import build_kgg, dg_depths, gg_depths, graph_from_depths, rng_depths

DISTRIBUTIONS = ("uniform", "gaussian", "clustered", "mixed")


@dataclass(frozen=True)
class TheoremSpec:
    run: Callable
    n_range: tuple[int, int]
    n_cap: Optional[int] = None
    even_only: bool = False
    description: str = ""


@dataclass(frozen=True)
class TrialConfig:
    theorem: str
    n_min: Optional[int] = None
    n_max: Optional[int] = None
    k: Optional[int] = None
    dist: str = "mixed"
    trials: int = 100
    seed: int = 0
    tau: float = 1e-9
    first_trial: int = 0
    eps: float = cons.COUNTEREXAMPLE_EPS
    jobs: int = 1

    def resolved(self) -> "TrialConfig":
        """Fill defaults from the theorem table and validate."""
        if self.theorem not in THEOREMS:
            raise ValueError(f"unknown theorem {self.theorem!r}; choose from {', '.join(THEOREMS)}")
        spec = THEOREMS[self.theorem]
        lo = spec.n_range[0] if self.n_min is None else self.n_min
        hi = spec.n_range[1] if self.n_max is None else self.n_max
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.dist not in DISTRIBUTIONS:
            raise ValueError(f"unknown distribution {self.dist!r}")
        if lo > hi:
            raise ValueError(f"empty n range {lo}-{hi}")
        if lo < 1:
            raise ValueError("n must be positive")
        if spec.n_cap is not None and hi > spec.n_cap:
            raise ValueError(f"{self.theorem} uses an exact oracle capped at n={spec.n_cap}, got n={hi}")
        if spec.even_only and (lo % 2 or hi % 2):
            raise ValueError(f"{self.theorem} needs even n; got range {lo}-{hi}")
        if self.k is not None and self.k < 0:
            raise ValueError("k must be non-negative")
        if not 0 < self.eps < 0.5:
            raise ValueError("eps must lie in (0, 1/2)")
        TolerancePolicy(self.tau)
        return TrialConfig(**{**asdict(self), "n_min": lo, "n_max": hi})


@dataclass
class Report:
    theorem: str
    config: dict
    records: list[dict] = field(default_factory=list)
    counterexample: Optional[dict] = None

    @property
    def failed(self) -> int:
        return sum(1 for r in self.records if not r["pass"])

    @property
    def passed(self) -> int:
        return len(self.records) - self.failed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "config": self.config,
            "summary": {"trials": len(self.records), "passed": self.passed, "failed": self.failed},
            "records": self.records,
            "counterexample": self.counterexample,
        }

    def to_json(self) -> str:
        return io.dumps(self.to_dict())


# -- instance sampling ----------------------------------------------------------


def instance_seed(seed: int, trial: int) -> int:
    return int(np.random.SeedSequence([seed, trial]).generate_state(1, np.uint64)[0])


def sample_points(rng: np.random.Generator, n: int, dist: str, tau: float = 1e-9) -> np.ndarray:
    for _ in range(100):
        if dist == "uniform":
            pts = rng.random((n, 2))
        elif dist == "gaussian":
            pts = rng.normal(size=(n, 2))
        elif dist == "clustered":
            centers = rng.random((max(1, n // 5), 2))
            pts = centers[rng.integers(0, len(centers), n)] + rng.normal(scale=0.04, size=(n, 2))
        else:
            raise ValueError(f"unknown distribution {dist!r}")
        try:
            check_distinct(pts, TolerancePolicy(tau))
            return pts
        except DuplicatePoints:
            continue
    raise RuntimeError("could not sample distinct points")


def _dist_for(cfg: TrialConfig, trial: int) -> str:
    if cfg.dist != "mixed":
        return cfg.dist
    return ("uniform", "clustered", "gaussian")[trial % 3]


def _sample_n(rng: np.random.Generator, cfg: TrialConfig, even: bool) -> int:
    if even:
        return 2 * int(rng.integers(cfg.n_min // 2, cfg.n_max // 2 + 1))
    return int(rng.integers(cfg.n_min, cfg.n_max + 1))


# -- per-theorem trials --------------------------------------------------------
# Each returns (record fields, passed, instance) for one seeded trial.


def _bottleneck10(cfg, trial, rng, pol):
    n = _sample_n(rng, cfg, even=True)
    pts = sample_points(rng, n, _dist_for(cfg, trial), pol.tau)
    depth = gg_depths(pts, pol)
    lm = lexmin_matching(pts)
    worst = max((int(depth[i, j]) for i, j in lm.pairs), default=0)
    bn = bottleneck_matching(pts).bottleneck
    same = math.isclose(lm.bottleneck, bn, rel_tol=1e-12, abs_tol=0.0)
    rec = {"n": n, "max_depth": worst, "lambda": lm.bottleneck, "lambda_search": bn}
    return rec, worst <= 10 and same, {"points": io.points_list(pts), "matching": [list(e) for e in lm.pairs]}


def _counterexample8(cfg, trial, rng, pol):
    # raw layout, not the self-checking generator: a violated constraint is
    # a failed trial with the instance attached rather than an exception
    pts, labels = cons.counterexample_points(cfg.eps, cons.COUNTEREXAMPLE_PHASE_DEG)
    inst = cons.LabeledInstance(pts, labels, {"eps": cfg.eps})
    a, b = inst["a"], inst["b"]
    checks = cons.counterexample_checks(inst.points, inst.labels, cfg.eps)
    depth_ab = cons.counterexample_depth_ab(inst, pol)
    g8, g9 = build_kgg(inst.points, 8, pol), build_kgg(inst.points, 9, pol)
    target = 1.0 + cfg.eps
    bn = bottleneck_matching(inst.points)
    forced = bottleneck_matching(inst.points, forbid=(a, b))
    rec = {
        "n": inst.n,
        "constraints_ok": all(h for _, h, _ in checks),
        "min_slack": min(s for name, _, s in checks if ">" in name),
        "depth_ab": depth_ab,
        "ab_in_8gg": g8.has_edge(a, b),
        "ab_in_9gg": g9.has_edge(a, b),
        "lambda": bn.bottleneck,
        "contains_ab": (a, b) in bn,
        "lambda_without_ab": forced.bottleneck,
    }
    ok = (
        rec["constraints_ok"]
        and depth_ab == 9
        and not rec["ab_in_8gg"]
        and rec["ab_in_9gg"]
        and abs(bn.bottleneck - target) <= 1e-12 * target
        and rec["contains_ab"]
        and forced.bottleneck > target
    )
    return rec, ok, {"points": io.points_list(inst.points), "labels": inst.labels}


def _gg_matching_bound(k: int, bound: Callable[[int], int]):
    def run(cfg, trial, rng, pol):
        n = _sample_n(rng, cfg, even=False)
        pts = sample_points(rng, n, _dist_for(cfg, trial), pol.tau)
        nu = matching_number(build_kgg(pts, k, pol))
        need = bound(n)
        return {"n": n, "nu": nu, "bound": need}, nu >= need, {"points": io.points_list(pts)}

    return run


def _perfect2(cfg, trial, rng, pol):
    n = _sample_n(rng, cfg, even=True)
    pts = sample_points(rng, n, _dist_for(cfg, trial), pol.tau)
    nu = matching_number(build_kgg(pts, 2, pol))
    return {"n": n, "nu": nu}, 2 * nu == n, {"points": io.points_list(pts)}


def _components(n: int, edges, alive: list[int]) -> list[list[int]]:
    alive_set = set(alive)
    adj = {v: [] for v in alive}
    for i, j in edges:
        if i in alive_set and j in alive_set:
            adj[i].append(j)
            adj[j].append(i)
    seen, comps = set(), []
    for v in alive:
        if v in seen:
            continue
        stack, comp = [v], []
        seen.add(v)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        comps.append(sorted(comp))
    return comps


def _fourdisk(cfg, trial, rng, pol):
    n = _sample_n(rng, cfg, even=False)
    pts = sample_points(rng, n, _dist_for(cfg, trial), pol.tau)
    removed: list[int] = []
    order = None
    if trial % 2 == 0:
        m = int(rng.integers(1, n + 1))
        part = Partition.from_labels(rng.integers(0, m, n).tolist())
    else:
        # components of GG_k minus a random removed set
        order = int(rng.integers(1, 3))
        g = build_kgg(pts, order, pol)
        # isolate a few seed vertices by removing their neighbourhoods
        adj = g.adjacency()
        seeds = rng.choice(n, int(rng.integers(1, max(1, n // 6) + 1)), replace=False).tolist()
        cut = {u for v in seeds for u in adj[v]} - set(seeds)
        extra = rng.choice(n, int(rng.integers(0, n // 6 + 1)), replace=False).tolist()
        removed = sorted((cut | set(extra)) - set(seeds))
        alive = [v for v in range(n) if v not in set(removed)]
        part = Partition.of(_components(n, g.edges, alive))
    tree = witness_tree(pts, part)
    ds = disk_system(pts, tree)
    ground_pts = pts[sorted(part.ground)]
    depth, where = max_depth(ds, pol=pol, exclude=ground_pts)
    raw_depth, raw_where = max_depth(ds, pol=pol)
    # closed depth above 3 may only occur at a shared tree endpoint
    raw_ok = raw_depth <= 3 or bool(
        (np.abs(ground_pts - np.asarray(raw_where)).max(axis=1) <= pol.tau).any()
    )
    intruders = disk_intruders(pts, ds, part.ground, pol)
    centers_ok = center_exclusion_check(ds, pol)
    crossings = crossing_pairs(pts, tree.edges)
    rec = {
        "n": n,
        "classes": len(part.classes),
        "disks": len(ds),
        "depth_off_ground": depth,
        "closed_depth": raw_depth,
        "empty_disks": not intruders,
        "center_exclusion": centers_ok,
        "tree_plane": not crossings,
    }
    ok = depth <= 3 and raw_ok and not intruders and centers_ok and not crossings
    if removed:
        q_depth, _ = max_depth(ds, pts[removed], pol)
        # each disk separates two components, so it must hold > order removed points
        hits = [len(v) for v in _removed_hits(pts, ds, removed, pol)]
        rec["removed_depth"] = q_depth
        rec["min_removed_per_disk"] = min(hits, default=None)
        ok = ok and q_depth <= 3 and all(h >= order + 1 for h in hits)
    inst = {"points": io.points_list(pts), "classes": [sorted(c) for c in part.classes], "removed": removed}
    if where is not None:
        inst["deepest_point"] = list(where)
    return rec, ok, inst


def _removed_hits(pts, ds, removed, pol):
    q = pts[removed]
    diff = q[:, None, :] - ds.centers[None, :, :]
    inside = 2.0 * (np.einsum("ijk,ijk->ij", diff, diff) - ds.radius2[None, :]) <= pol.tau
    return [np.nonzero(inside[:, d])[0] for d in range(len(ds))]


def _tutteberge(cfg, trial, rng, pol):
    n = _sample_n(rng, cfg, even=False)
    if trial % 3 == 2 and n >= 2:
        pts = sample_points(rng, n, "uniform", pol.tau)
        g = build_kgg(pts, int(rng.integers(0, 3)), pol)
        graph = Graph(n, g.edges)
        kind = "gabriel"
    else:
        p = float(rng.uniform(0.05, 0.7))
        iu, ju = np.triu_indices(n, 1)
        keep = rng.random(len(iu)) < p
        graph = Graph.from_edges(n, zip(iu[keep].tolist(), ju[keep].tolist()))
        kind = "gnp"
    nu = matching_number(graph)
    rep = deficiency(graph)
    witness_ok = deficiency_of(graph, rep.witness) == rep.deficiency
    rec = {"n": n, "kind": kind, "edges": len(graph.edges), "nu": nu, "deficiency": rep.deficiency}
    ok = 2 * nu == n - rep.deficiency and witness_ok
    return rec, ok, {"n": n, "edges": [list(e) for e in sorted(graph.edges)]}


def _blocking(cfg, trial, rng, pol):
    n = _sample_n(rng, cfg, even=False)
    pts = sample_points(rng, n, _dist_for(cfg, trial), pol.tau)
    ks = [cfg.k] if cfg.k is not None else [0, 1, 2]
    rec: dict = {"n": n}
    ok = True
    for k in ks:
        delta = cons.default_delta(pts)
        shrinks = 0
        blockers = cons.blockers_right(pts, k, delta)
        rep = cons.verify_blocked(pts, blockers, k, pol)
        while not rep.blocked and shrinks < 3:
            delta /= 10.0
            shrinks += 1
            blockers = cons.blockers_right(pts, k, delta)
            rep = cons.verify_blocked(pts, blockers, k, pol)
        size_ok = len(blockers) == (k + 1) * (n - 1)
        rec[f"k{k}"] = {"blockers": len(blockers), "blocked": rep.blocked, "shrinks": shrinks}
        ok = ok and rep.blocked and size_ok
    # fewer than ceil((n-1)/3) random points never block the Gabriel graph
    m = max(0, math.ceil((n - 1) / 3) - 1)
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    few = lo + rng.random((m, 2)) * (hi - lo)
    under = cons.verify_blocked(pts, few, 0, pol).blocked
    rec["undersized_blocks"] = under
    ok = ok and not under
    return rec, ok, {"points": io.points_list(pts)}


def _structure(cfg, trial, rng, pol):
    n = _sample_n(rng, cfg, even=False)
    pts = sample_points(rng, n, _dist_for(cfg, trial), pol.tau)
    kmax = 3 if cfg.k is None else cfg.k
    gd, rd, dd = gg_depths(pts, pol), rng_depths(pts, pol), dg_depths(pts, pol)
    graphs = {
        fam: [graph_from_depths(d, k, fam) for k in range(kmax + 2)]
        for fam, d in (("RNG", rd), ("GG", gd), ("DG", dd))
    }
    chain = all(
        graphs["RNG"][k].edges <= graphs["GG"][k].edges <= graphs["DG"][k].edges for k in range(kmax + 1)
    )
    monotone = all(gs[k].edges <= gs[k + 1].edges for gs in graphs.values() for k in range(kmax + 1))
    g0 = graphs["GG"][0]
    plane = not crossing_pairs(pts, g0.sorted_edges())
    bound = n < 5 or len(g0.edges) <= 3 * n - 8
    mst_in = all(g0.has_edge(i, j) for i, j in emst(pts))
    rec = {"n": n, "gg0_edges": len(g0.edges), "chain": chain, "monotone": monotone,
           "plane": plane, "edge_bound": bound, "emst_in_gg0": mst_in}
    return rec, chain and monotone and plane and bound and mst_in, {"points": io.points_list(pts)}


def _independence(cfg, trial, rng, pol):
    n = _sample_n(rng, cfg, even=False)
    pts = sample_points(rng, n, _dist_for(cfg, trial), pol.tau)
    g = build_kgg(pts, 0, pol)
    alpha, nu = independence_number(g), matching_number(g)
    # lower side: GG_0 is planar, hence four-colourable
    ok = alpha <= n - nu and alpha >= math.ceil(n / 4)
    return {"n": n, "alpha": alpha, "nu": nu}, ok, {"points": io.points_list(pts)}


THEOREMS: dict[str, TheoremSpec] = {
    "bottleneck10": TheoremSpec(_bottleneck10, (4, 12), n_cap=14, even_only=True,
                                description="lex-min perfect matching lies in GG_10"),
    "counterexample8": TheoremSpec(_counterexample8, (20, 20),
                                   description="20-point set whose bottleneck matchings avoid GG_8"),
    "match0": TheoremSpec(_gg_matching_bound(0, lambda n: (n - 1 + 3) // 4), (2, 60),
                          description="nu(GG_0) >= ceil((n-1)/4)"),
    "match1": TheoremSpec(_gg_matching_bound(1, lambda n: (2 * (n - 1) + 4) // 5), (2, 60),
                          description="nu(GG_1) >= ceil(2(n-1)/5)"),
    "perfect2": TheoremSpec(_perfect2, (2, 60), even_only=True, description="GG_2 has a perfect matching"),
    "fourdisk": TheoremSpec(_fourdisk, (5, 40), description="partition-MST disks: depth <= 3, empty, centre-free"),
    "tutteberge": TheoremSpec(_tutteberge, (1, 14), n_cap=16, description="nu = (n - def)/2"),
    "blocking": TheoremSpec(_blocking, (2, 30), description="(k+1)(n-1) right-offset points block GG_k"),
    "structure": TheoremSpec(_structure, (5, 25), description="RNG_k <= GG_k <= DG_k, GG_0 plane, EMST in GG_0"),
    "independence": TheoremSpec(_independence, (2, 20), n_cap=20, description="alpha(GG_0) <= n - nu"),
}


def run_trial(cfg: TrialConfig, trial: int) -> tuple[dict, Optional[dict]]:
    spec = THEOREMS[cfg.theorem]
    iseed = instance_seed(cfg.seed, trial)
    rng = np.random.default_rng(iseed)
    rec, ok, inst = spec.run(cfg, trial, rng, TolerancePolicy(cfg.tau))
    record = {"trial": trial, "instance_seed": iseed, **rec, "pass": bool(ok)}
    return record, (None if ok else inst)


def run(cfg: TrialConfig) -> Report:
    cfg = cfg.resolved()
    conf = asdict(cfg)
    conf.pop("jobs")
    report = Report(cfg.theorem, conf)
    trials = range(cfg.first_trial, cfg.first_trial + cfg.trials)
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(partial(run_trial, cfg), trials, chunksize=max(1, cfg.trials // (4 * cfg.jobs))))
    else:
        results = [run_trial(cfg, t) for t in trials]
    for record, inst in results:
        report.records.append(record)
        if inst is not None and report.counterexample is None:
            report.counterexample = {
                "trial": record["trial"],
                "instance_seed": record["instance_seed"],
                "replay": (
                    f"kgg verify --theorem {cfg.theorem} --seed {cfg.seed} --first-trial {record['trial']}"
                    f" --trials 1 --n {cfg.n_min}-{cfg.n_max} --dist {cfg.dist} --tau {cfg.tau!r}"
                    + (f" --k {cfg.k}" if cfg.k is not None else "")
                    + (f" --eps {cfg.eps!r}" if cfg.theorem == "counterexample8" else "")
                ),
                "instance": inst,
            }
    return report
