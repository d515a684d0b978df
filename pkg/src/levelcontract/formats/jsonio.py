"""JSON encoding of level graphs.

Rationals are ``{"num": p, "den": q}`` with ``q > 0`` and ``gcd(p, q) = 1``.
Level tables are objects keyed by the level index written as a string.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import gcd

from ..levelgraph import KINDS, Edge, LevelGraph, Marking, Vertex
from ..errors import StructuralError
from .dsl import FormatError


class SchemaError(FormatError):
    def __init__(self, path: str, message: str):
        self.path = path
        self.detail = message
        super().__init__(f"{path or '/'}: {message}")


def rat_to_json(x: Fraction) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def graph_to_dict(graph: LevelGraph) -> dict:
    return {
        "vertices": [{"id": v.id, "genus": v.genus, "level": v.level, "kind": v.kind} for v in graph.vertices],
        "edges": [
            {"id": e.id, "upper": e.upper, "lower": e.lower, "slope": e.slope, "length": rat_to_json(e.length)}
            for e in graph.edges
        ],
        "markings": [{"id": m.id, "vertex": m.vertex, "order": m.order} for m in graph.markings],
        "levels": {str(k): rat_to_json(ell) for k, ell in graph.levels},
    }


def to_json(graph: LevelGraph) -> str:
    return json.dumps(graph_to_dict(graph), sort_keys=True, indent=2) + "\n"


def _int(x, path):
    if isinstance(x, bool) or not isinstance(x, int):
        raise SchemaError(path, f"expected an integer, got {json.dumps(x)}")
    return x


def _str(x, path):
    if not isinstance(x, str) or not x:
        raise SchemaError(path, f"expected a non-empty string, got {json.dumps(x)}")
    return x


def _obj(x, path, keys, optional=()):
    if not isinstance(x, dict):
        raise SchemaError(path, "expected an object")
    for k in keys:
        if k not in x:
            raise SchemaError(f"{path}/{k}", "missing required field")
    extra = set(x) - set(keys) - set(optional)
    if extra:
        raise SchemaError(f"{path}/{sorted(extra)[0]}", "unexpected field")
    return x


def rat_from_json(x, path) -> Fraction:
    _obj(x, path, ("num", "den"))
    num = _int(x["num"], f"{path}/num")
    den = _int(x["den"], f"{path}/den")
    if den <= 0:
        raise SchemaError(f"{path}/den", f"denominator must be positive, got {den}")
    if gcd(num, den) != 1:
        raise SchemaError(path, f"{num}/{den} is not in lowest terms")
    return Fraction(num, den)


def graph_from_dict(doc) -> LevelGraph:
    _obj(doc, "", ("vertices", "edges", "markings", "levels"))
    for key in ("vertices", "edges", "markings"):
        if not isinstance(doc[key], list):
            raise SchemaError(f"/{key}", "expected an array")
    vertices = []
    for n, v in enumerate(doc["vertices"]):
        p = f"/vertices/{n}"
        _obj(v, p, ("id", "genus", "level"), ("kind",))
        kind = v.get("kind", "stable")
        if kind not in KINDS:
            raise SchemaError(f"{p}/kind", f"expected one of {', '.join(KINDS)}")
        vertices.append(Vertex(_str(v["id"], f"{p}/id"), _int(v["genus"], f"{p}/genus"), _int(v["level"], f"{p}/level"), kind))
    edges = []
    for n, e in enumerate(doc["edges"]):
        p = f"/edges/{n}"
        _obj(e, p, ("id", "upper", "lower", "slope", "length"))
        edges.append(
            Edge(
                _str(e["id"], f"{p}/id"),
                _str(e["upper"], f"{p}/upper"),
                _str(e["lower"], f"{p}/lower"),
                _int(e["slope"], f"{p}/slope"),
                rat_from_json(e["length"], f"{p}/length"),
            )
        )
    markings = []
    for n, m in enumerate(doc["markings"]):
        p = f"/markings/{n}"
        _obj(m, p, ("id", "vertex", "order"))
        markings.append(Marking(_str(m["id"], f"{p}/id"), _str(m["vertex"], f"{p}/vertex"), _int(m["order"], f"{p}/order")))
    if not isinstance(doc["levels"], dict):
        raise SchemaError("/levels", "expected an object")
    levels = {}
    for k, ell in doc["levels"].items():
        try:
            idx = int(k)
        except ValueError:
            raise SchemaError(f"/levels/{k}", "level keys must be integers") from None
        if str(idx) != k:
            raise SchemaError(f"/levels/{k}", "level keys must be canonical integers")
        levels[idx] = rat_from_json(ell, f"/levels/{k}")
    for key, items in (("vertices", vertices), ("edges", edges), ("markings", markings)):
        seen = set()
        for n, x in enumerate(items):
            if x.id in seen:
                raise SchemaError(f"/{key}/{n}/id", f"duplicate id {x.id!r}")
            seen.add(x.id)
    vids = {v.id for v in vertices}
    for n, e in enumerate(edges):
        for end in ("upper", "lower"):
            if getattr(e, end) not in vids:
                raise SchemaError(f"/edges/{n}/{end}", f"undeclared vertex {getattr(e, end)!r}")
    for n, m in enumerate(markings):
        if m.vertex not in vids:
            raise SchemaError(f"/markings/{n}/vertex", f"undeclared vertex {m.vertex!r}")
    try:
        return LevelGraph(vertices=tuple(vertices), edges=tuple(edges), markings=tuple(markings), levels=levels)
    except StructuralError as exc:
        raise SchemaError("", str(exc)) from None


def from_json(text: str) -> LevelGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return graph_from_dict(doc)
