"""Command-line front end.

Exit status: 0 success, 1 a verification failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from kgg import constructions as cons
from kgg import io
from kgg.errors import KGGError
from kgg.geom import TolerancePolicy
from kgg.matching import Graph, bottleneck_matching, lexmin_matching, max_matching
from kgg.partition_mst import disk_system, emst
from kgg.proximity import Family, build
from kgg.render import render_svg
from kgg.trials import DISTRIBUTIONS, THEOREMS, TrialConfig, run

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _pair(text: str) -> tuple[int, int]:
    try:
        i, j = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'i,j', got {text!r}") from None
    return i, j


def _n_range(text: str) -> tuple[int, int]:
    try:
        if "-" in text:
            lo, hi = (int(v) for v in text.split("-", 1))
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'N' or 'LO-HI', got {text!r}") from None
    return lo, hi


def _policy(args) -> TolerancePolicy:
    return TolerancePolicy(args.tau) if args.tau is not None else TolerancePolicy.from_env()


def _write(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _graph_doc(points, labels, g, pol) -> dict:
    return {
        "n": g.n,
        "family": g.family.value,
        "k": g.order,
        "tau": pol.tau,
        "vertices": io.points_list(points),
        "labels": labels,
        "edges": [{"i": i, "j": j, "depth": g.depth[(i, j)]} for i, j in g.sorted_edges()],
    }


def _matching_doc(m, mode: str, carrier: str) -> dict:
    return {
        "mode": mode,
        "carrier": carrier,
        "size": m.size,
        "pairs": [list(e) for e in m.pairs],
        "ws": list(m.ws),
        "lambda": m.bottleneck,
    }


def cmd_build(args) -> int:
    pol = _policy(args)
    pts, labels = io.load_points(args.points)
    g = build(pts, args.family, args.k, pol)
    _write(io.dumps(_graph_doc(pts, labels, g, pol)), args.out)
    if args.svg:
        Path(args.svg).write_text(render_svg(pts, edges=g.sorted_edges(), labels=labels))
    return EXIT_OK


def cmd_match(args) -> int:
    pol = _policy(args)
    pts, labels = io.load_points(args.points)
    n = len(pts)
    if args.mode == "max":
        g = build(pts, args.family, 0 if args.k is None else args.k, pol)
        m = max_matching(g, pts)
        carrier = f"{g.family.value}_{g.order}"
    elif args.mode == "bottleneck":
        edges = None
        carrier = "complete"
        if args.k is not None:
            g = build(pts, args.family, args.k, pol)
            edges, carrier = g.edges, f"{g.family.value}_{g.order}"
        m = bottleneck_matching(pts, edges, forbid=args.forbid_edge)
    else:
        if args.forbid_edge is not None or args.k is not None:
            raise UsageError("lexmin runs on the complete graph; --k and --forbid-edge do not apply")
        m = lexmin_matching(pts)
        carrier = "complete"
    doc = _matching_doc(m, args.mode, carrier)
    doc["n"] = n
    _write(io.dumps(doc), args.out)
    if args.svg:
        Path(args.svg).write_text(render_svg(pts, matching=m.pairs, labels=labels))
    return EXIT_OK


def cmd_verify(args) -> int:
    lo, hi = args.n if args.n is not None else (None, None)
    cfg = TrialConfig(
        theorem=args.theorem,
        n_min=lo,
        n_max=hi,
        k=args.k,
        dist=args.dist,
        trials=args.trials,
        seed=args.seed,
        tau=_policy(args).tau,
        first_trial=args.first_trial,
        eps=args.eps,
        jobs=args.jobs,
    )
    try:
        cfg = cfg.resolved()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    start = time.perf_counter()
    report = run(cfg)
    elapsed = time.perf_counter() - start
    _write(report.to_json(), args.out)
    status = "PASS" if report.ok else "FAIL"
    print(
        f"{status} {cfg.theorem}: {report.passed}/{len(report.records)} trials passed in {elapsed:.2f}s",
        file=sys.stderr,
    )
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_gen(args) -> int:
    blockers = None
    if args.name == "counterexample8gg":
        inst = cons.gen_counterexample_8gg(args.eps)
        pts, labels, header = inst.points, inst.labels, [f"order-8 counterexample, eps={args.eps!r}"]
    elif args.name == "tight0gg":
        inst = cons.gen_tight_0gg(_policy(args))
        pts, labels, header = inst.points, inst.labels, ["17 points, Gabriel graph is a tree with matching number 4"]
    elif args.name == "blockingtight":
        inst, blk = cons.gen_blocking_tight(_policy(args))
        pts, labels, header = inst.points, inst.labels, ["13 points blocked by 4 square centres"]
        blockers = blk.points
    else:
        pts = cons.gen_collinear(args.n, args.spacing)
        labels, header = {}, [f"{args.n} collinear points, spacing {args.spacing!r}"]
    _write(io.emit_points(pts, labels, header), args.out)
    if blockers is not None and args.blockers_out:
        io.save_points(args.blockers_out, blockers, {f"w{i + 1}": i for i in range(len(blockers))})
    if args.svg:
        Path(args.svg).write_text(render_svg(pts, blockers=blockers, labels=labels))
    return EXIT_OK


def cmd_render(args) -> int:
    pol = _policy(args)
    pts, labels = io.load_points(args.points)
    edges = build(pts, args.family, args.k, pol).sorted_edges() if args.edges else []
    disks: list[tuple[int, int]] = []
    if args.disks == "mst":
        disks = list(disk_system(pts, emst(pts)).witnesses)
    elif args.disks == "edges":
        disks = edges
    disks += [tuple(p) for p in args.disk_pair or []]
    matching = []
    if args.matching == "max":
        matching = list(max_matching(Graph(len(pts), frozenset(edges))).pairs)
    elif args.matching == "bottleneck":
        matching = list(bottleneck_matching(pts).pairs)
    blockers = io.load_points(args.blockers)[0] if args.blockers else None
    svg = render_svg(pts, edges=edges, disks=disks, matching=matching, blockers=blockers,
                     labels=labels if args.labels else None)
    _write(svg, args.out)
    return EXIT_OK


def cmd_block(args) -> int:
    pol = _policy(args)
    pts, _ = io.load_points(args.points)
    if args.blockers:
        kpts = io.load_points(args.blockers)[0]
    else:
        kpts = cons.blockers_right(pts, args.k, args.delta).points
    rep = cons.verify_blocked(pts, kpts, args.k, pol)
    doc = {
        "n": len(pts),
        "k": args.k,
        "blockers": io.points_list(kpts),
        "count": len(kpts),
        "lower_bound": math.ceil((args.k + 1) * (len(pts) - 1) / 3),
        "blocked": rep.blocked,
        "unblocked": [list(e) for e in rep.unblocked],
    }
    _write(io.dumps(doc), args.out)
    if args.svg:
        Path(args.svg).write_text(render_svg(pts, edges=rep.unblocked, blockers=kpts))
    return EXIT_OK if rep.blocked else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kgg", description="Order-k Gabriel graphs, matchings and blocking sets.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, out=True, svg=True):
        sp.add_argument("--tau", type=float, default=None, help="predicate tolerance (default: $KGG_TAU or 1e-9)")
        if out:
            sp.add_argument("--out", help="output file (default: stdout)")
        if svg:
            sp.add_argument("--svg", help="also write an SVG drawing here")

    families = [f.value for f in Family]

    sp = sub.add_parser("build", help="build a proximity graph")
    sp.add_argument("points")
    sp.add_argument("--family", choices=families, default="GG")
    sp.add_argument("--k", type=int, default=0)
    common(sp)
    sp.set_defaults(func=cmd_build)

    sp = sub.add_parser("match", help="maximum, bottleneck or lex-min matching")
    sp.add_argument("points")
    sp.add_argument("--mode", choices=["max", "bottleneck", "lexmin"], default="max")
    sp.add_argument("--family", choices=families, default="GG")
    sp.add_argument("--k", type=int, default=None, help="carrier graph order (bottleneck: default complete graph)")
    sp.add_argument("--forbid-edge", type=_pair, default=None, metavar="I,J")
    common(sp)
    sp.set_defaults(func=cmd_match)

    sp = sub.add_parser("verify", help="run seeded randomized property trials")
    sp.add_argument("--theorem", required=True, choices=list(THEOREMS))
    sp.add_argument("--n", type=_n_range, default=None, metavar="N|LO-HI")
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--dist", choices=DISTRIBUTIONS, default="mixed")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--first-trial", type=int, default=0)
    sp.add_argument("--eps", type=float, default=cons.COUNTEREXAMPLE_EPS)
    sp.add_argument("--jobs", type=int, default=1)
    common(sp, svg=False)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("gen", help="write one of the extremal configurations")
    sp.add_argument("name", choices=["counterexample8gg", "tight0gg", "blockingtight", "collinear"])
    sp.add_argument("--eps", type=float, default=cons.COUNTEREXAMPLE_EPS)
    sp.add_argument("--n", type=int, default=5)
    sp.add_argument("--spacing", type=float, default=1.0)
    sp.add_argument("--blockers-out", help="blockingtight: write the blockers here")
    common(sp)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("render", help="draw points, graph edges, disks and matchings as SVG")
    sp.add_argument("points")
    sp.add_argument("--family", choices=families, default="GG")
    sp.add_argument("--k", type=int, default=0)
    sp.add_argument("--no-edges", dest="edges", action="store_false")
    sp.add_argument("--disks", choices=["none", "mst", "edges"], default="none")
    sp.add_argument("--disk-pair", type=_pair, action="append", metavar="I,J")
    sp.add_argument("--matching", choices=["none", "max", "bottleneck"], default="none")
    sp.add_argument("--blockers", help="point file of blockers to draw")
    sp.add_argument("--labels", action="store_true")
    common(sp, svg=False)
    sp.set_defaults(func=cmd_render)

    sp = sub.add_parser("block", help="place right-offset blockers (or load them) and verify")
    sp.add_argument("points")
    sp.add_argument("--k", type=int, default=0)
    sp.add_argument("--delta", type=float, default=None)
    sp.add_argument("--blockers", help="verify these blockers instead of generating")
    common(sp)
    sp.set_defaults(func=cmd_block)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "k", None) is not None and args.k < 0:
        parser.error("--k must be non-negative")
    try:
        return args.func(args)
    except (KGGError, UsageError, ValueError, json.JSONDecodeError) as exc:
        print(f"kgg {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
