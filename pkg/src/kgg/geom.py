"""Planar primitives: squared distances, the diameter-disk predicate and
weight-sequence ordering.

All predicates work on squared lengths.  A single absolute tolerance
``tau`` classifies discriminants as negative / zero / positive.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from kgg.errors import DegenerateDiameter, DuplicatePoints

DEFAULT_TAU = 1e-9


class Point(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class TolerancePolicy:
    tau: float = DEFAULT_TAU

    def __post_init__(self):
        if not (self.tau >= 0 and math.isfinite(self.tau)):
            raise ValueError(f"tolerance must be a finite non-negative number, got {self.tau!r}")

    @classmethod
    def from_env(cls) -> "TolerancePolicy":
        """Default policy, overridden by the ``KGG_TAU`` environment variable."""
        raw = os.environ.get("KGG_TAU")
        return cls(float(raw)) if raw else cls()


DEFAULT_POLICY = TolerancePolicy()


class DiskMembership(enum.Enum):
    OUTSIDE = "outside"
    BOUNDARY = "boundary"
    INSIDE = "inside"

    @property
    def in_closed_disk(self) -> bool:
        return self is not DiskMembership.OUTSIDE


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def as_points(points) -> np.ndarray:
    """Coerce ``points`` to a float ``(n, 2)`` array and reject non-finite input."""
    arr = np.asarray(points, dtype=float)
    if arr.size == 0:
        return arr.reshape(0, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"expected an (n, 2) array of coordinates, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("coordinates must be finite")
    return arr


def dist2(p: Sequence[float], q: Sequence[float]) -> float:
    dx = p[0] - q[0]
    dy = p[1] - q[1]
    return dx * dx + dy * dy


def pairwise_dist2(points: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - points[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def check_distinct(points: np.ndarray, pol: TolerancePolicy = DEFAULT_POLICY) -> None:
    """Raise DuplicatePoints when two points coincide within ``pol.tau``."""
    n = len(points)
    if n < 2:
        return
    d = pairwise_dist2(points)
    iu = np.triu_indices(n, 1)
    close = d[iu] <= pol.tau * pol.tau
    if np.any(close):
        k = int(np.argmax(close))
        raise DuplicatePoints(f"points {iu[0][k]} and {iu[1][k]} coincide")


def disk_discriminant(a, b, r) -> float:
    """``|ar|^2 + |rb|^2 - |ab|^2``; negative strictly inside the diameter disk of ab."""
    return dist2(a, r) + dist2(r, b) - dist2(a, b)


def classify(d: float, pol: TolerancePolicy = DEFAULT_POLICY) -> DiskMembership:
    if d < -pol.tau:
        return DiskMembership.INSIDE
    if d > pol.tau:
        return DiskMembership.OUTSIDE
    return DiskMembership.BOUNDARY


def disk_membership(a, b, r, pol: TolerancePolicy = DEFAULT_POLICY) -> DiskMembership:
    """Where ``r`` lies relative to the closed disk with diameter ``ab``.

    Boundary and Inside both count as "in the closed disk" for order-k
    Gabriel counting.
    """
    if dist2(a, b) <= pol.tau * pol.tau:
        raise DegenerateDiameter(f"diameter endpoints {tuple(a)} and {tuple(b)} coincide")
    return classify(disk_discriminant(a, b, r), pol)


def compare_ws(w1: Sequence[float], w2: Sequence[float]) -> Ordering:
    """Lexicographic order; a proper prefix compares Less."""
    for x, y in zip(w1, w2):
        if x < y:
            return Ordering.LESS
        if x > y:
            return Ordering.GREATER
    if len(w1) < len(w2):
        return Ordering.LESS
    if len(w1) > len(w2):
        return Ordering.GREATER
    return Ordering.EQUAL


def weight_sequence(weights) -> tuple[float, ...]:
    return tuple(sorted((float(w) for w in weights), reverse=True))


def orient(p, q, r) -> float:
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def segments_cross(p1, p2, q1, q2, tau: float = 0.0) -> bool:
    """True when the two segments cross at a point interior to both.

    Segments sharing an endpoint, touching or overlapping collinearly are
    not reported.
    """
    d1 = orient(q1, q2, p1)
    d2 = orient(q1, q2, p2)
    d3 = orient(p1, p2, q1)
    d4 = orient(p1, p2, q2)
    return ((d1 > tau and d2 < -tau) or (d1 < -tau and d2 > tau)) and (
        (d3 > tau and d4 < -tau) or (d3 < -tau and d4 > tau)
    )
