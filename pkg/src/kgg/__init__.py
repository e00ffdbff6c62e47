"""Order-k Gabriel, relative-neighbourhood and Delaunay graphs, with the
matching, partition-MST disk and blocking-set machinery built on them."""

from kgg.geom import DiskMembership, TolerancePolicy, compare_ws, disk_membership, dist2
from kgg.matching import (
    Graph,
    Matching,
    bottleneck_matching,
    deficiency,
    has_perfect_matching,
    independence_number,
    lexmin_matching,
    max_matching,
)
from kgg.proximity import Family, ProximityGraph, build_kdg, build_kgg, build_krng, edge_depth_gg

__version__ = "0.1.0"

__all__ = [
    "DiskMembership", "TolerancePolicy", "compare_ws", "disk_membership", "dist2",
    "Graph", "Matching", "bottleneck_matching", "deficiency", "has_perfect_matching",
    "independence_number", "lexmin_matching", "max_matching",
    "Family", "ProximityGraph", "build_kdg", "build_kgg", "build_krng", "edge_depth_gg",
]
