"""Level-by-level contraction analysis.

For a target level ``i`` the dualizing bundle is twisted by the vertical
divisor ``sum_{j > i} (ell_i - ell_j) X_j``.  Restricted to a vertex ``v`` this
has degree

    D_i(v) = 2 g(v) - 2 + val(v) + sum_{e at v} (c(other end) - c(level(v))) / a(e)

where ``c(j) = ell_i - ell_j`` above ``i`` and ``0`` otherwise.  Dividing by the
edge length accounts for the ``A_{a-1}`` point of the total space at a node
``uv = t^a``.  When nothing obstructs the contraction, ``D_i`` vanishes on every
vertex above ``i``; the components above ``i`` are then contracted to
singularities whose invariants are reported here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .errors import InternalInvariantViolation, InvalidInput, NotContractible, OddSignatureSum, UnknownLevel
from .levelgraph import (
    LEAF,
    STABLE,
    Edge,
    LevelGraph,
    Marking,
    Vertex,
    arithmetic_genus,
    components_above,
    induced_genus,
    validate,
)

MARKED_ZERO_ABOVE = "MarkedZeroAbove"
MARKED_POLE_ABOVE = "MarkedPoleAbove"
LONG_EDGE_CROSSING = "LongEdgeCrossing"


@dataclass(frozen=True)
class TwistData:
    level: int
    multiplicities: tuple[tuple[int, Fraction], ...]

    def multiplicity(self, j: int) -> Fraction:
        return dict(self.multiplicities)[j]

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.multiplicities)

    def nonzero(self) -> dict[int, Fraction]:
        return {j: c for j, c in self.multiplicities if c}


@dataclass(frozen=True)
class Obstruction:
    code: str
    location: str

    @property
    def fatal(self) -> bool:
        return self.code == MARKED_POLE_ABOVE


@dataclass(frozen=True)
class SingularityRecord:
    component: frozenset[str]
    branches: int
    genus: int
    delta: int
    contacts: tuple[int, ...]
    branch_edges: tuple[str, ...] = ()


@dataclass(frozen=True)
class ContractionResult:
    twist: TwistData
    singularities: tuple[SingularityRecord, ...]
    descent_degrees: dict[str, Fraction] = field(default_factory=dict)
    total: int = 0
    quotient_b1: int = 0

    def reassembled_genus(self, graph: LevelGraph) -> int:
        """Arithmetic genus of the contracted curve, from its pieces."""
        rest = sum(graph.vertex(v).genus for v in self.descent_degrees)
        return rest + sum(s.delta - (s.branches - 1) for s in self.singularities) + self.quotient_b1


def _check_level(graph: LevelGraph, i: int) -> None:
    if i not in graph.level_table:
        raise UnknownLevel(i)


def twist_multiplicities(graph: LevelGraph, i: int) -> TwistData:
    _check_level(graph, i)
    ell_i = graph.ell(i)
    mult = tuple((j, ell_i - ell if j > i else Fraction(0)) for j, ell in graph.levels)
    return TwistData(i, mult)


def twisted_degree(graph: LevelGraph, i: int, v: str, twist: TwistData | None = None) -> Fraction:
    """``D_i(v)``; defined for any graph, obstructed or not."""
    if twist is None:
        return twisted_degrees(graph, i)[graph.vertex(v).id]
    c = twist.as_dict()
    vert = graph.vertex(v)
    deg = Fraction(2 * vert.genus - 2 + graph.valence(v))
    here = c[vert.level]
    for e in graph.down_edges(v):
        deg += (c[graph.level_of(e.lower)] - here) / e.length
    for e in graph.up_edges(v):
        deg += (c[graph.level_of(e.upper)] - here) / e.length
    return deg


def twisted_degrees(graph: LevelGraph, i: int) -> dict[str, Fraction]:
    """``D_i`` on every vertex, in one pass over the edges.

    Accumulated in integers over a common denominator and cached on the
    (immutable) graph per level.
    """
    cache = graph.__dict__.setdefault("_twisted_degrees", {})
    if i not in cache:
        cache[i] = _twisted_degrees(graph, i)
    return dict(cache[i])


def _twisted_degrees(graph: LevelGraph, i: int) -> dict[str, Fraction]:
    c = twist_multiplicities(graph, i).as_dict()
    lc = lcm(*(x.denominator for x in c.values()))
    cz = {j: int(x * lc) for j, x in c.items()}
    q = lc * lcm(*(e.length.numerator for e in graph.edges)) if graph.edges else lc
    level = {v.id: v.level for v in graph.vertices}
    base = {v.id: 2 * v.genus - 2 for v in graph.vertices}
    acc = dict.fromkeys(base, 0)
    for e in graph.edges:
        a = e.length
        term = (cz[level[e.lower]] - cz[level[e.upper]]) * a.denominator * (q // (a.numerator * lc))
        base[e.upper] += 1
        base[e.lower] += 1
        acc[e.upper] += term
        acc[e.lower] -= term
    return {v: base[v] + Fraction(acc[v], q) for v in base}


def _require_valid(graph: LevelGraph) -> None:
    report = validate(graph)
    if not report.valid:
        raise InvalidInput(report)


def obstructions(graph: LevelGraph, i: int) -> list[Obstruction]:
    _check_level(graph, i)
    out = []
    for m in graph.markings:
        if graph.level_of(m.vertex) > i:
            out.append(Obstruction(MARKED_ZERO_ABOVE if m.order >= 0 else MARKED_POLE_ABOVE, m.id))
    for e in graph.edges:
        if graph.level_of(e.upper) > i > graph.level_of(e.lower):
            out.append(Obstruction(LONG_EDGE_CROSSING, e.id))
    return out


def check_contractibility(graph: LevelGraph, i: int) -> list[Obstruction]:
    """Empty list when the components above ``i`` can be contracted.

    In that case the twisted degree must vanish above ``i``; a nonzero value
    raises :class:`InternalInvariantViolation`.
    """
    _require_valid(graph)
    found = obstructions(graph, i)
    if not found:
        degrees = twisted_degrees(graph, i)
        for v in graph.vertices:
            if v.level > i and degrees[v.id] != 0:
                raise InternalInvariantViolation(f"D_{i}({v.id}) = {degrees[v.id]} on an unobstructed graph")
    return found


def contract(graph: LevelGraph, i: int) -> ContractionResult:
    found = check_contractibility(graph, i)
    if found:
        raise NotContractible(found)
    twist = twist_multiplicities(graph, i)
    comps = components_above(graph, i)
    owner = {v: n for n, comp in enumerate(comps) for v in comp}
    sings = []
    for comp in comps:
        boundary = sorted(
            (e for e in graph.edges if e.upper in comp and e.lower not in comp), key=lambda e: e.id
        )
        assert all(graph.level_of(e.lower) == i for e in boundary)
        p_y = induced_genus(graph, comp)
        k = len(boundary)
        sings.append(
            SingularityRecord(
                component=comp,
                branches=k,
                genus=p_y,
                delta=p_y + k - 1,
                contacts=tuple(sorted(e.slope for e in boundary)),
                branch_edges=tuple(e.id for e in boundary),
            )
        )
    all_degrees = twisted_degrees(graph, i)
    degrees = {v.id: all_degrees[v.id] for v in graph.vertices if v.level <= i}
    total = 2 * arithmetic_genus(graph) - 2
    if sum(degrees.values()) != total:
        raise InternalInvariantViolation(f"descent degrees sum to {sum(degrees.values())}, expected {total}")

    # quotient graph: remaining vertices plus one point per contracted component
    kept_edges = [e for e in graph.edges if not (e.upper in owner and e.lower in owner)]
    b1 = len(kept_edges) - (len(degrees) + len(comps)) + 1
    return ContractionResult(twist, tuple(sings), degrees, total, b1)


def test_configuration(mu) -> LevelGraph:
    """Two-level graph of a weighted blowup at every zero of a smooth curve.

    A center of genus ``(sum mu + 2) / 2`` sits at level 0; each zero of order
    ``m`` moves to a leaf joined by an edge of slope ``m + 1`` and length
    ``L / (m + 1)``, with ``L`` the lcm of the slopes.
    """
    mu = [int(m) for m in mu]
    if not mu:
        raise ValueError("test configuration needs at least one zero")
    if any(m < 0 for m in mu):
        raise ValueError(f"orders must be nonnegative, got {mu}")
    if sum(mu) % 2:
        raise OddSignatureSum(mu)
    g = (sum(mu) + 2) // 2
    kappas = [m + 1 for m in mu]
    L = lcm(*kappas)
    vertices = [Vertex("center", g, 0, STABLE)]
    edges, marks = [], []
    for n, (m, k) in enumerate(zip(mu, kappas), start=1):
        vertices.append(Vertex(f"leaf{n}", 0, -1, LEAF))
        edges.append(Edge(f"e{n}", "center", f"leaf{n}", k, Fraction(L, k)))
        marks.append(Marking(f"z{n}", f"leaf{n}", m))
    return LevelGraph(tuple(vertices), tuple(edges), tuple(marks), {0: 0, -1: L})


test_configuration.__test__ = False  # not a pytest test
