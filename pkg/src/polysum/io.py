"""JSON formats. Rationals travel as strings ("p/q" or integers)."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .errors import PolysumError
from .flag import GradedPoset
from .polytope import VPolytope
from .report import fmt_rat


def polytope_to_json(p: VPolytope) -> dict:
    return {
        "name": p.name,
        "ambient_dim": p.ambient_dim,
        "vertices": [[fmt_rat(x) for x in v] for v in p.vertices],
    }


def polytope_from_json(data: dict) -> VPolytope:
    try:
        n = int(data["ambient_dim"])
        verts = data["vertices"]
        if not isinstance(verts, list) or not verts:
            raise PolysumError("'vertices' must be a nonempty list")
        pts = []
        for v in verts:
            if len(v) != n:
                raise PolysumError(f"vertex {v} does not have {n} coordinates")
            if any(not isinstance(x, (str, int)) or isinstance(x, bool) for x in v):
                raise PolysumError(f"coordinates must be strings or integers: {v}")
            pts.append(tuple(Fraction(x) for x in v))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, PolysumError):
            raise
        raise PolysumError(f"malformed polytope JSON: {exc}") from exc
    return VPolytope(pts, name=str(data.get("name", "")))


def read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise PolysumError(f"cannot read {path}: {exc}") from exc


def load_polytope(path) -> VPolytope:
    p = polytope_from_json(read_json(path))
    if not p.name:
        p.name = Path(path).stem
    return p


def load_input(path):
    """A polytope or, when the file has a "ranks" key, a graded poset."""
    data = read_json(path)
    if isinstance(data, dict) and "ranks" in data:
        return GradedPoset.from_json(data)
    p = polytope_from_json(data)
    if not p.name:
        p.name = Path(path).stem
    return p


def dump_json(data, path=None) -> str:
    text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def save_polytope(p: VPolytope, path) -> None:
    dump_json(polytope_to_json(p), path)
