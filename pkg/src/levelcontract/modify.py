"""Semistable modification of level graphs.

Three surgeries, composed by :func:`semistable_modification`:

* marked zeros above the target level are pushed down a chain of genus-0
  vertices ending in a leaf vertex at the target level;
* long edges are subdivided by genus-0 chain vertices on the levels they cross;
* a global base change ``t = s^d`` clears the denominators of edge lengths and
  vanishing orders.

New vertices are always placed on existing levels, so each new edge has the
forced length ``(ell(lower) - ell(upper)) / kappa``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import lcm

from .errors import InvalidInput, MarkedPoleAbove, UnknownLevel
from .levelgraph import (
    CHAIN,
    LEAF,
    Edge,
    LevelGraph,
    Marking,
    Vertex,
    crossed_levels,
    normalize_levels,
    validate,
)

MINIMAL = "minimal"
FULL = "full"


@dataclass(frozen=True)
class ModificationMode:
    kind: str
    level: int

    def __post_init__(self):
        if self.kind not in (MINIMAL, FULL):
            raise ValueError(f"mode must be {MINIMAL!r} or {FULL!r}, got {self.kind!r}")

    @classmethod
    def minimal(cls, level: int) -> "ModificationMode":
        return cls(MINIMAL, level)

    @classmethod
    def full(cls, level: int) -> "ModificationMode":
        return cls(FULL, level)


@dataclass(frozen=True)
class ChainInsertion:
    vertex: str
    level: int
    source_edge: str


@dataclass(frozen=True)
class LeafChain:
    marking: str
    source_vertex: str
    vertices: tuple[str, ...]  # top down, last one is the leaf


@dataclass(frozen=True)
class ModificationReport:
    vertex_map: dict[str, str] = field(default_factory=dict)
    chain_vertices: tuple[ChainInsertion, ...] = ()
    leaf_chains: tuple[LeafChain, ...] = ()
    d: int = 1
    level_map: dict[int, int] = field(default_factory=dict)

    def compose(self, later: "ModificationReport") -> "ModificationReport":
        """Report of ``self`` followed by ``later``."""
        return ModificationReport(
            vertex_map={k: later.vertex_map.get(v, v) for k, v in self.vertex_map.items()},
            chain_vertices=self.chain_vertices + later.chain_vertices,
            leaf_chains=self.leaf_chains + later.leaf_chains,
            d=self.d * later.d,
            level_map={k: later.level_map.get(v, v) for k, v in self.level_map.items()},
        )

    @property
    def created(self) -> list[str]:
        out = [c.vertex for c in self.chain_vertices]
        for chain in self.leaf_chains:
            out.extend(chain.vertices)
        return sorted(out)

    def to_dict(self) -> dict:
        return {
            "vertex_map": dict(sorted(self.vertex_map.items())),
            "chain_vertices": [
                {"vertex": c.vertex, "level": c.level, "source_edge": c.source_edge} for c in self.chain_vertices
            ],
            "leaf_chains": [
                {"marking": c.marking, "source_vertex": c.source_vertex, "vertices": list(c.vertices)}
                for c in self.leaf_chains
            ],
            "d": self.d,
            "level_map": {str(k): v for k, v in sorted(self.level_map.items(), reverse=True)},
        }


def _require_valid(graph: LevelGraph) -> None:
    report = validate(graph)
    if not report.valid:
        raise InvalidInput(report)


def _fresh(base: str, taken: set[str]) -> str:
    while base in taken:
        base += "'"
    taken.add(base)
    return base


def _identity_report(graph: LevelGraph, **kw) -> ModificationReport:
    return ModificationReport(
        vertex_map={v.id: v.id for v in graph.vertices},
        level_map={k: k for k in graph.level_indices},
        **kw,
    )


def _check_no_poles_above(graph: LevelGraph, i: int) -> None:
    for m in graph.markings:
        if m.order < 0 and graph.level_of(m.vertex) > i:
            raise MarkedPoleAbove(m.id, i)


def expand_marked_zeros(graph: LevelGraph, i: int) -> tuple[LevelGraph, ModificationReport]:
    """Move every marking strictly above level ``i`` onto a new leaf at ``i``.

    The marking of order ``m`` on ``v`` is replaced by a chain of edges of slope
    ``m + 1`` through one genus-0 vertex on each existing level between
    ``level(v)`` and ``i``.  A leaf that gives up its marking becomes a chain
    vertex.  Raises :class:`MarkedPoleAbove` for a marked pole above ``i``.
    """
    _require_valid(graph)
    return _expand(graph, i)


def _expand(graph: LevelGraph, i: int) -> tuple[LevelGraph, ModificationReport]:
    if i not in graph.level_table:
        raise UnknownLevel(i)
    _check_no_poles_above(graph, i)

    vertex_ids = {v.id for v in graph.vertices}
    edge_ids = {e.id for e in graph.edges}
    vertices = {v.id: v for v in graph.vertices}
    edges = list(graph.edges)
    markings = {m.id: m for m in graph.markings}
    chains = []
    for m in graph.markings:
        h = graph.level_of(m.vertex)
        if h <= i:
            continue
        kappa = m.order + 1
        path = [h] + [k for k in graph.level_indices if i <= k < h]
        prev = m.vertex
        created = []
        for hi, lo in zip(path, path[1:]):
            kind = LEAF if lo == i else CHAIN
            vid = _fresh(f"{m.id}@{lo}", vertex_ids)
            vertices[vid] = Vertex(vid, 0, lo, kind)
            eid = _fresh(f"{m.id}@{hi}:{lo}", edge_ids)
            edges.append(Edge(eid, prev, vid, kappa, (graph.ell(lo) - graph.ell(hi)) / kappa))
            created.append(vid)
            prev = vid
        markings[m.id] = Marking(m.id, prev, m.order)
        src = vertices[m.vertex]
        if src.kind == LEAF:
            vertices[m.vertex] = Vertex(src.id, src.genus, src.level, CHAIN)
        chains.append(LeafChain(m.id, m.vertex, tuple(created)))

    out = graph.replace(vertices=tuple(vertices.values()), edges=tuple(edges), markings=tuple(markings.values()))
    return out, _identity_report(graph, leaf_chains=tuple(chains))


def subdivide_long_edges(graph: LevelGraph, mode: ModificationMode) -> tuple[LevelGraph, ModificationReport]:
    """Split long edges by chain vertices.

    ``minimal(i)`` splits only edges crossing level ``i``, with one chain vertex
    at ``i``.  ``full(i)`` splits every edge that skips a level, putting a chain
    vertex on each crossed level.  Slopes are kept; lengths are forced.
    """
    _require_valid(graph)
    return _subdivide(graph, mode)


def _subdivide(graph: LevelGraph, mode: ModificationMode) -> tuple[LevelGraph, ModificationReport]:
    if mode.level not in graph.level_table:
        raise UnknownLevel(mode.level)
    vertex_ids = {v.id for v in graph.vertices}
    edge_ids = {e.id for e in graph.edges}
    vertices = list(graph.vertices)
    edges = []
    inserted = []
    for e in graph.edges:
        crossed = crossed_levels(graph, e)
        if mode.kind == MINIMAL:
            crossed = [k for k in crossed if k == mode.level]
        if not crossed:
            edges.append(e)
            continue
        stops = [graph.level_of(e.upper)] + crossed + [graph.level_of(e.lower)]
        ends = [e.upper]
        for k in crossed:
            vid = _fresh(f"{e.id}@{k}", vertex_ids)
            vertices.append(Vertex(vid, 0, k, CHAIN))
            inserted.append(ChainInsertion(vid, k, e.id))
            ends.append(vid)
        ends.append(e.lower)
        for (hi, lo), (a, b) in zip(zip(stops, stops[1:]), zip(ends, ends[1:])):
            eid = _fresh(f"{e.id}@{hi}:{lo}", edge_ids)
            edges.append(Edge(eid, a, b, e.slope, (graph.ell(lo) - graph.ell(hi)) / e.slope))
    out = graph.replace(vertices=tuple(vertices), edges=tuple(edges))
    return out, _identity_report(graph, chain_vertices=tuple(inserted))


def base_change_exponent(graph: LevelGraph) -> int:
    dens = [e.length.denominator for e in graph.edges] + [ell.denominator for _, ell in graph.levels]
    return lcm(*dens) if dens else 1


def clear_denominators(graph: LevelGraph) -> tuple[LevelGraph, int]:
    """Apply the base change ``t = s^d`` with ``d`` the least common
    denominator of all lengths and vanishing orders."""
    d = base_change_exponent(graph)
    if d == 1:
        return graph, 1
    edges = tuple(Edge(e.id, e.upper, e.lower, e.slope, e.length * d) for e in graph.edges)
    levels = {k: ell * d for k, ell in graph.levels}
    return graph.replace(edges=edges, levels=levels), d


def semistable_modification(graph: LevelGraph, i: int, mode: str = MINIMAL) -> tuple[LevelGraph, ModificationReport]:
    """Expand marked zeros down to ``i``, subdivide long edges, clear
    denominators, then re-index levels.

    Afterwards no marking sits strictly above ``i`` and no edge crosses ``i``;
    with ``mode="full"`` every long edge is also subdivided.
    """
    m = ModificationMode(mode, i)
    _require_valid(graph)
    g1, r1 = _expand(graph, i)
    g2, r2 = _subdivide(g1, m)
    g3, d = clear_denominators(g2)
    g4, level_map = normalize_levels(g3)
    report = r1.compose(r2)
    report = ModificationReport(
        vertex_map=report.vertex_map,
        chain_vertices=report.chain_vertices,
        leaf_chains=report.leaf_chains,
        d=d,
        level_map={k: level_map[k] for k in graph.level_indices},
    )
    return g4, report


__all__ = [
    "FULL",
    "MINIMAL",
    "ChainInsertion",
    "LeafChain",
    "ModificationMode",
    "ModificationReport",
    "base_change_exponent",
    "clear_denominators",
    "expand_marked_zeros",
    "semistable_modification",
    "subdivide_long_edges",
]
