"""Enhanced level graphs of generalized multiscale differentials.

A level graph is the dual graph of a pointed nodal curve whose vertices are
sorted into levels ``0, -1, ..., -L``.  Each level carries a vanishing order
``ell`` (strictly increasing downwards, ``ell(0) = 0``) and each edge carries a
slope ``kappa`` and a length ``a`` with ``kappa * a = ell(lower) - ell(upper)``.
The half-edge orders are never stored: the upper branch of an edge has a zero
of order ``kappa - 1`` and the lower branch a pole of order ``-kappa - 1``.

All numbers are exact: integers or :class:`fractions.Fraction`.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

from .errors import DisconnectedGraph, StructuralError, UnknownLevel, UnknownVertex

STABLE = "stable"
CHAIN = "chain"
LEAF = "leaf"
KINDS = (STABLE, CHAIN, LEAF)


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


@dataclass(frozen=True, order=True)
class Vertex:
    id: str
    genus: int
    level: int
    kind: str = STABLE


@dataclass(frozen=True, order=True)
class Edge:
    """A node of the curve; ``upper`` lies on the higher level."""

    id: str
    upper: str
    lower: str
    slope: int
    length: Fraction

    def __post_init__(self):
        object.__setattr__(self, "length", as_fraction(self.length))


@dataclass(frozen=True, order=True)
class Marking:
    """A marked point; ``order >= 0`` is a zero, ``order < 0`` a marked pole."""

    id: str
    vertex: str
    order: int


@dataclass(frozen=True)
class Violation:
    code: str
    location: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def status(self) -> str:
        return "valid" if not self.violations else "invalid"

    @property
    def valid(self) -> bool:
        return not self.violations

    def codes(self) -> list[str]:
        return [v.code for v in self.violations]

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "violations": [
                {"code": v.code, "location": v.location, "message": v.message}
                for v in self.violations
            ],
        }


@dataclass(frozen=True)
class LevelGraph:
    """Immutable enhanced level graph.

    ``levels`` maps level index to vanishing order.  Collections are stored as
    tuples sorted by id, so two graphs with the same content compare equal
    regardless of construction order.
    """

    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...] = ()
    markings: tuple[Marking, ...] = ()
    levels: tuple[tuple[int, Fraction], ...] = field(default=())

    def __post_init__(self):
        levels = self.levels
        if isinstance(levels, Mapping):
            levels = levels.items()
        levels = tuple(sorted(((int(k), as_fraction(v)) for k, v in levels), reverse=True))
        if len({k for k, _ in levels}) != len(levels):
            raise StructuralError("duplicate level index in level table")
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "vertices", tuple(sorted(self.vertices, key=lambda v: v.id)))
        object.__setattr__(self, "edges", tuple(sorted(self.edges, key=lambda e: e.id)))
        object.__setattr__(self, "markings", tuple(sorted(self.markings, key=lambda m: m.id)))
        for kind, items in (("vertex", self.vertices), ("edge", self.edges), ("marking", self.markings)):
            dup = [i for i, c in Counter(x.id for x in items).items() if c > 1]
            if dup:
                raise StructuralError(f"duplicate {kind} id {sorted(dup)[0]!r}")
        ids = {v.id for v in self.vertices}
        for e in self.edges:
            for end in (e.upper, e.lower):
                if end not in ids:
                    raise StructuralError(f"edge {e.id!r} references undeclared vertex {end!r}")
        for m in self.markings:
            if m.vertex not in ids:
                raise StructuralError(f"marking {m.id!r} references undeclared vertex {m.vertex!r}")

    @classmethod
    def build(cls, vertices: Iterable, edges: Iterable = (), markings: Iterable = (), levels=()) -> "LevelGraph":
        """Build from plain tuples: ``(id, genus, level[, kind])``,
        ``(id, upper, lower, slope, length)`` and ``(id, vertex, order)``."""

        def mk(typ, x):
            return x if isinstance(x, typ) else typ(*x)

        return cls(
            vertices=tuple(mk(Vertex, v) for v in vertices),
            edges=tuple(mk(Edge, e) for e in edges),
            markings=tuple(mk(Marking, m) for m in markings),
            levels=levels,
        )

    # lookups

    @cached_property
    def level_table(self) -> dict[int, Fraction]:
        return dict(self.levels)

    @cached_property
    def vertex_map(self) -> dict[str, Vertex]:
        return {v.id: v for v in self.vertices}

    @cached_property
    def edge_map(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def marking_map(self) -> dict[str, Marking]:
        return {m.id: m for m in self.markings}

    @cached_property
    def _incidence(self) -> dict[str, tuple[list[Edge], list[Edge], list[Marking]]]:
        inc = {v.id: ([], [], []) for v in self.vertices}
        for e in self.edges:
            inc[e.upper][0].append(e)
            inc[e.lower][1].append(e)
        for m in self.markings:
            inc[m.vertex][2].append(m)
        return inc

    def vertex(self, vid: str) -> Vertex:
        try:
            return self.vertex_map[vid]
        except KeyError:
            raise UnknownVertex(vid) from None

    def down_edges(self, vid: str) -> list[Edge]:
        """Edges with ``vid`` as upper endpoint."""
        return self._incidence[vid][0]

    def up_edges(self, vid: str) -> list[Edge]:
        """Edges with ``vid`` as lower endpoint."""
        return self._incidence[vid][1]

    def markings_at(self, vid: str) -> list[Marking]:
        return self._incidence[vid][2]

    def valence(self, vid: str) -> int:
        down, up, _ = self._incidence[vid]
        return len(down) + len(up)

    def ell(self, level: int) -> Fraction:
        try:
            return self.level_table[level]
        except KeyError:
            raise UnknownLevel(level) from None

    def level_of(self, vid: str) -> int:
        return self.vertex(vid).level

    @property
    def level_indices(self) -> list[int]:
        """Level indices from the top down."""
        return [k for k, _ in self.levels]

    @property
    def bottom_level(self) -> int:
        return min(self.level_table)

    def vertices_at(self, level: int) -> list[Vertex]:
        return [v for v in self.vertices if v.level == level]

    def replace(self, **changes) -> "LevelGraph":
        data = dict(vertices=self.vertices, edges=self.edges, markings=self.markings, levels=self.levels)
        data.update(changes)
        return LevelGraph(**data)


# connectivity helpers


def _components(vertex_ids: Iterable[str], edges: Iterable[Edge]) -> list[frozenset[str]]:
    parent = {v: v for v in vertex_ids}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in edges:
        if e.upper in parent and e.lower in parent:
            ru, rl = find(e.upper), find(e.lower)
            if ru != rl:
                parent[max(ru, rl)] = min(ru, rl)
    groups: dict[str, set[str]] = {}
    for v in parent:
        groups.setdefault(find(v), set()).add(v)
    return sorted((frozenset(g) for g in groups.values()), key=min)


def is_connected(graph: LevelGraph) -> bool:
    return len(_components((v.id for v in graph.vertices), graph.edges)) == 1


def induced_genus(graph: LevelGraph, vertex_ids: Iterable[str]) -> int:
    """Arithmetic genus of the subcurve on ``vertex_ids`` (assumed connected)."""
    ids = set(vertex_ids)
    n_edges = sum(1 for e in graph.edges if e.upper in ids and e.lower in ids)
    return sum(graph.vertex(v).genus for v in ids) + n_edges - len(ids) + 1


def arithmetic_genus(graph: LevelGraph) -> int:
    """``sum g(v) + b_1`` of a connected level graph."""
    if not graph.vertices or not is_connected(graph):
        raise DisconnectedGraph("arithmetic genus needs a connected graph")
    return induced_genus(graph, graph.vertex_map)


def signature(graph: LevelGraph) -> list[int]:
    """Marking orders as a sorted list (the multiset ``mu``)."""
    return sorted(m.order for m in graph.markings)


def components_above(graph: LevelGraph, i: int) -> list[frozenset[str]]:
    """Connected components of the subgraph strictly above level ``i``,
    ordered by least vertex id."""
    if i not in graph.level_table:
        raise UnknownLevel(i)
    ids = [v.id for v in graph.vertices if v.level > i]
    return _components(ids, graph.edges)


def degree_defect(graph: LevelGraph, vid: str) -> int:
    """``2g - 2`` minus the total order of the differential at ``vid``.

    Zero exactly when the local degree identity holds.
    """
    v = graph.vertex(vid)
    total = sum(m.order for m in graph.markings_at(vid))
    total += sum(e.slope - 1 for e in graph.down_edges(vid))
    total += sum(-e.slope - 1 for e in graph.up_edges(vid))
    return 2 * v.genus - 2 - total


def validate(graph: LevelGraph) -> ValidationReport:
    """Check every axiom of a generalized multiscale level graph.

    Violations are collected, never raised, in a deterministic order.  The
    report is cached on the (immutable) graph.
    """
    cached = graph.__dict__.get("_validation")
    if cached is None:
        cached = _validate(graph)
        graph.__dict__["_validation"] = cached
    return cached


def _validate(graph: LevelGraph) -> ValidationReport:
    out: list[Violation] = []

    def bad(code, loc, msg):
        out.append(Violation(code, loc, msg))

    table = graph.level_table
    # level table
    if 0 not in table:
        bad("MissingTopLevel", "levels", "level table has no entry for level 0")
    elif table[0] != 0:
        bad("TopLevelNonzero", "levels/0", f"vanishing order at level 0 is {table[0]}, expected 0")
    idx = graph.level_indices
    if idx and idx != list(range(0, -len(idx), -1)):
        bad("LevelGap", "levels", f"level indices {idx} are not 0, -1, ..., -{len(idx) - 1}")
    for hi, lo in zip(idx, idx[1:]):
        if not table[lo] > table[hi]:
            bad(
                "VanishingOrderNotIncreasing",
                f"levels/{lo}",
                f"ell({lo}) = {table[lo]} is not greater than ell({hi}) = {table[hi]}",
            )
    occupied = {v.level for v in graph.vertices}
    for k in idx:
        if k not in occupied:
            bad("EmptyLevel", f"levels/{k}", f"no vertex lies at level {k}")

    if not graph.vertices:
        bad("EmptyGraph", "vertices", "graph has no vertices")
    elif not is_connected(graph):
        bad("Disconnected", "graph", "underlying graph is not connected")

    for v in graph.vertices:
        loc = f"vertex {v.id}"
        if v.genus < 0:
            bad("NegativeGenus", loc, f"genus {v.genus} < 0")
        if v.level not in table:
            bad("UnknownLevel", loc, f"level {v.level} is not in the level table")
        if v.kind not in KINDS:
            bad("UnknownKind", loc, f"kind {v.kind!r} is not one of {', '.join(KINDS)}")

    for e in graph.edges:
        loc = f"edge {e.id}"
        if e.slope < 1:
            bad("NonPositiveSlope", loc, f"slope {e.slope} < 1")
        if e.length <= 0:
            bad("NonPositiveLength", loc, f"length {e.length} <= 0")
        lu, ll = graph.level_of(e.upper), graph.level_of(e.lower)
        if not lu > ll:
            bad("EdgeNotDescending", loc, f"upper level {lu} is not above lower level {ll}")
        elif lu in table and ll in table:
            drop = table[ll] - table[lu]
            if e.slope * e.length != drop:
                bad(
                    "SlopeLengthMismatch",
                    loc,
                    f"slope*length = {e.slope}*{e.length} = {e.slope * e.length} != ell({ll}) - ell({lu}) = {drop}",
                )

    for v in graph.vertices:
        loc = f"vertex {v.id}"
        defect = degree_defect(graph, v.id)
        if defect:
            bad("DegreeMismatch", loc, f"2g-2 = {2 * v.genus - 2} but the orders sum to {2 * v.genus - 2 - defect}")
        down, up, marks = graph.down_edges(v.id), graph.up_edges(v.id), graph.markings_at(v.id)
        if v.kind == CHAIN:
            if v.genus != 0 or len(up) != 1 or len(down) != 1 or marks or up[0].slope != down[0].slope:
                bad(
                    "MalformedChainVertex",
                    loc,
                    "chain vertex needs genus 0, one upward and one downward edge of equal slope, no markings",
                )
        elif v.kind == LEAF:
            ok = v.genus == 0 and len(up) == 1 and not down and len(marks) == 1
            ok = ok and marks[0].order >= 0 and up[0].slope == marks[0].order + 1
            if not ok:
                bad(
                    "MalformedLeafVertex",
                    loc,
                    "leaf vertex needs genus 0, one upward edge of slope m+1, one marking of order m >= 0",
                )
    return ValidationReport(tuple(out))


def adjacent(graph: LevelGraph, upper_level: int, lower_level: int) -> bool:
    """Whether two level indices are consecutive entries of the table."""
    idx = graph.level_indices
    try:
        return idx.index(lower_level) == idx.index(upper_level) + 1
    except ValueError:
        return False


def crossed_levels(graph: LevelGraph, e: Edge) -> list[int]:
    """Level indices strictly between the endpoints of ``e``, top down."""
    hi, lo = graph.level_of(e.upper), graph.level_of(e.lower)
    return [k for k in graph.level_indices if lo < k < hi]


def normalize_levels(graph: LevelGraph) -> tuple[LevelGraph, dict[int, int]]:
    """Drop unoccupied levels and re-index to ``0, -1, ..., -L``.

    Vanishing orders are shifted so the new top level has order 0.
    """
    occupied = sorted({v.level for v in graph.vertices}, reverse=True)
    remap = {old: -k for k, old in enumerate(occupied)}
    if all(old == new for old, new in remap.items()) and len(remap) == len(graph.levels):
        return graph, remap
    top = graph.ell(occupied[0]) if occupied else Fraction(0)
    levels = {remap[k]: graph.ell(k) - top for k in occupied}
    verts = tuple(Vertex(v.id, v.genus, remap[v.level], v.kind) for v in graph.vertices)
    return graph.replace(vertices=verts, levels=levels), remap
