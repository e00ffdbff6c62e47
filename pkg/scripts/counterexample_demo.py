"""Build the 20-point order-8 configuration, print every constraint with its
slack, and draw D[a,b] over the Gabriel graph of order 8."""

from __future__ import annotations

import argparse
from pathlib import Path

from kgg.constructions import COUNTEREXAMPLE_EPS, counterexample_checks, gen_counterexample_8gg
from kgg.matching import bottleneck_matching
from kgg.proximity import build_kgg, edge_depth_gg
from kgg.render import render_svg

ap = argparse.ArgumentParser(description=__doc__)
ap.add_argument("--eps", type=float, default=COUNTEREXAMPLE_EPS)
ap.add_argument("--svg", type=Path, default=None)
args = ap.parse_args()

inst = gen_counterexample_8gg(args.eps)
a, b = inst["a"], inst["b"]
checks = counterexample_checks(inst.points, inst.labels, args.eps)
for name, holds, slack in sorted(checks, key=lambda c: c[2]):
    print(f"{'ok ' if holds else 'BAD'} {name:<24} slack {slack:+.3e}")

m = bottleneck_matching(inst.points)
alt = bottleneck_matching(inst.points, forbid=(a, b))
print(f"\ndepth(a,b) = {edge_depth_gg(inst.points, a, b)}")
print(f"lambda = {m.bottleneck!r} (1+eps = {1 + args.eps!r}), uses (a,b): {(a, b) in m}")
print(f"lambda with (a,b) forbidden = {alt.bottleneck!r}")

if args.svg:
    g8 = build_kgg(inst.points, 8)
    args.svg.write_text(render_svg(inst.points, edges=g8.sorted_edges(), disks=[(a, b)],
                                   matching=m.pairs, labels=inst.labels))
    print(f"wrote {args.svg}")
