"""Deterministic SVG drawings of point sets, graphs, disks and blockers."""

from __future__ import annotations

from typing import Iterable, Optional

import numpy as np

from kgg.geom import as_points

_STYLE = {
    "edge": 'stroke="#333" stroke-width="1.2"',
    "matching": 'stroke="#c0392b" stroke-width="3"',
    "disk": 'fill="#2e86de" fill-opacity="0.12" stroke="#2e86de" stroke-width="0.8"',
    "point": 'fill="#111"',
    "blocker": 'fill="#fff" stroke="#111" stroke-width="1.2"',
}


def _fmt(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


def render_svg(
    points,
    edges: Iterable[tuple[int, int]] = (),
    disks: Iterable[tuple[int, int]] = (),
    matching: Iterable[tuple[int, int]] = (),
    blockers=None,
    labels: Optional[dict[str, int]] = None,
    size: int = 600,
    margin: int = 24,
) -> str:
    """SVG with a fixed viewport: the bounding box of everything drawn is
    scaled uniformly into ``size`` x ``size`` pixels, y pointing up.

    ``disks`` are given as index pairs and drawn as their diameter disks.
    """
    pts = as_points(points)
    blk = as_points(blockers) if blockers is not None else np.zeros((0, 2))
    disks = [tuple(d) for d in disks]
    boxes = [pts, blk]
    for i, j in disks:
        c = (pts[i] + pts[j]) / 2
        r = np.linalg.norm(pts[i] - pts[j]) / 2
        boxes.append(np.array([c - r, c + r]))
    allp = np.concatenate([b for b in boxes if len(b)]) if any(len(b) for b in boxes) else np.zeros((1, 2))
    lo, hi = allp.min(axis=0), allp.max(axis=0)
    span = float(max(hi[0] - lo[0], hi[1] - lo[1], 1e-12))
    scale = (size - 2 * margin) / span

    def tx(p):
        return margin + (p[0] - lo[0]) * scale, size - margin - (p[1] - lo[1]) * scale

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="#fff"/>',
    ]
    for i, j in disks:
        cx, cy = tx((pts[i] + pts[j]) / 2)
        r = np.linalg.norm(pts[i] - pts[j]) / 2 * scale
        out.append(f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(r)}" {_STYLE["disk"]}/>')
    for kind, segs in (("edge", edges), ("matching", matching)):
        for i, j in sorted(tuple(sorted(e)) for e in segs):
            (x1, y1), (x2, y2) = tx(pts[i]), tx(pts[j])
            out.append(
                f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" {_STYLE[kind]}/>'
            )
    for p in pts:
        x, y = tx(p)
        out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="3.5" {_STYLE["point"]}/>')
    for p in blk:
        x, y = tx(p)
        out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="4" {_STYLE["blocker"]}/>')
    for name, i in sorted((labels or {}).items(), key=lambda kv: kv[1]):
        x, y = tx(pts[i])
        out.append(f'<text x="{_fmt(x + 5)}" y="{_fmt(y - 5)}" font-size="11" font-family="sans-serif">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
