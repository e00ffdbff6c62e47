"""Largest feasible eps of the order-8 configuration as the ab direction turns.

At phase 10 degrees a and b sit halfway between neighbouring r-directions,
which is where the slack peaks.
"""

from __future__ import annotations

import argparse

import numpy as np

from kgg.constructions import counterexample_eps_max, gen_counterexample_8gg
from kgg.matching import bottleneck_matching
from kgg.proximity import edge_depth_gg

ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
ap.add_argument("--steps", type=int, default=21)
args = ap.parse_args()

print(f"{'phase':>6} {'eps_max':>10} {'depth':>6} {'forced gap':>11}")
for phase in np.linspace(0.0, 20.0, args.steps):
    eps_max = counterexample_eps_max(float(phase))
    if eps_max == 0:
        print(f"{phase:6.1f} {'infeasible':>10}")
        continue
    eps = eps_max / 2
    inst = gen_counterexample_8gg(eps, float(phase))
    a, b = inst["a"], inst["b"]
    gap = bottleneck_matching(inst.points, forbid=(a, b)).bottleneck - (1 + eps)
    print(f"{phase:6.1f} {eps_max:10.6f} {edge_depth_gg(inst.points, a, b):6d} {gap:11.2e}")
