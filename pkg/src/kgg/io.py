"""Point files and JSON documents.

Point file: one point per line, ``x y`` as decimal literals, optional
``label=NAME`` suffix, ``#`` starts a comment.  Emitting uses ``repr`` of
each float, so parse(emit(x)) reproduces the coordinates bit for bit.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from kgg.errors import KGGError


class PointFileError(KGGError, ValueError):
    def __init__(self, message: str, line: Optional[int] = None, source: str = "<string>"):
        self.line = line
        where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + message)


def parse_points(text: str, source: str = "<string>") -> tuple[np.ndarray, dict[str, int]]:
    coords: list[tuple[float, float]] = []
    labels: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        label = None
        if fields[-1].startswith("label="):
            label = fields.pop()[len("label="):]
            if not label:
                raise PointFileError("empty label", lineno, source)
            if label in labels:
                raise PointFileError(f"duplicate label {label!r}", lineno, source)
        if len(fields) != 2:
            raise PointFileError(f"expected 'x y [label=NAME]', got {raw.strip()!r}", lineno, source)
        try:
            x, y = float(fields[0]), float(fields[1])
        except ValueError:
            raise PointFileError(f"not a number in {raw.strip()!r}", lineno, source) from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise PointFileError("coordinates must be finite", lineno, source)
        if label is not None:
            labels[label] = len(coords)
        coords.append((x, y))
    pts = np.array(coords, dtype=float).reshape(-1, 2)
    return pts, labels


def emit_points(points, labels: Optional[dict[str, int]] = None, header: Sequence[str] = ()) -> str:
    inv = {i: name for name, i in (labels or {}).items()}
    lines = [f"# {h}" for h in header]
    for i, (x, y) in enumerate(np.asarray(points, dtype=float).reshape(-1, 2)):
        line = f"{float(x)!r} {float(y)!r}"
        if i in inv:
            line += f" label={inv[i]}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def load_points(path: str | Path) -> tuple[np.ndarray, dict[str, int]]:
    """Read a point file, or a JSON document with a ``vertices`` or ``points`` list."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise PointFileError(str(exc), None, str(path)) from None
    if text.lstrip().startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise PointFileError(exc.msg, exc.lineno, str(path)) from None
        key = "vertices" if "vertices" in doc else "points"
        if key not in doc:
            raise PointFileError("JSON input needs a 'vertices' or 'points' list", None, str(path))
        pts = np.array(doc[key], dtype=float).reshape(-1, 2)
        labels = {str(k): int(v) for k, v in doc.get("labels", {}).items()}
        return pts, labels
    return parse_points(text, str(path))


def save_points(path: str | Path, points, labels=None, header: Sequence[str] = ()) -> None:
    Path(path).write_text(emit_points(points, labels, header))


def dumps(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def points_list(points) -> list[list[float]]:
    return [[float(x), float(y)] for x, y in np.asarray(points, dtype=float).reshape(-1, 2)]
