"""How often the closed partition-MST disks meet four deep at a shared tree
vertex, versus the punctured depth everywhere else.

A closed diameter disk contains its own endpoints, so a witness-tree vertex
of degree d lies in d disks.  The four-disk bound only holds off the ground
set; this script counts both quantities over random instances.
"""

from __future__ import annotations

import argparse
from collections import Counter

import numpy as np

from kgg.partition_mst import Partition, disk_system, max_depth, witness_tree
from kgg.trials import sample_points

ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
ap.add_argument("--instances", type=int, default=2000)
ap.add_argument("--seed", type=int, default=0)
args = ap.parse_args()

rng = np.random.default_rng(args.seed)
closed, punctured = Counter(), Counter()
for _ in range(args.instances):
    n = int(rng.integers(5, 41))
    pts = sample_points(rng, n, str(rng.choice(["uniform", "gaussian", "clustered"])))
    part = Partition.singletons(range(n)) if rng.random() < 0.5 else \
        Partition.from_labels(rng.integers(0, int(rng.integers(2, n + 1)), n))
    ds = disk_system(pts, witness_tree(pts, part))
    closed[max_depth(ds)[0]] += 1
    punctured[max_depth(ds, exclude=pts)[0]] += 1

print("depth  closed  off-ground")
for d in sorted(set(closed) | set(punctured)):
    print(f"{d:5d} {closed[d]:7d} {punctured[d]:11d}")
