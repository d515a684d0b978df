"""Residue bookkeeping on level graphs.

Every edge is a polar locus on its lower branch (pole of order ``kappa + 1``),
and so is every marking of negative order.  Residues are exact complex
rationals.  Three conditions are checked:

* residue theorem: on each vertex the residues of its poles sum to zero;
* global residue condition at level ``i``: for each component above ``i``
  without marked poles, the residues at the nodes joining it to level ``i``
  sum to zero;
* the semistable rule: a chain or leaf vertex has a single polar edge, whose
  residue is therefore zero.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    InternalInvariantViolation,
    InvalidInput,
    LongEdgeCrossing,
    MarkedPolesPresent,
    MissingResidue,
    SimplePoleZeroResidue,
    UnknownLevel,
    UnknownLocus,
)
from .levelgraph import CHAIN, LEAF, LevelGraph, as_fraction, components_above, validate
from .linalg import nullspace, rank


@dataclass(frozen=True)
class ComplexRational:
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", as_fraction(self.re))
        object.__setattr__(self, "im", as_fraction(self.im))

    def __add__(self, other: "ComplexRational") -> "ComplexRational":
        return ComplexRational(self.re + other.re, self.im + other.im)

    def __neg__(self) -> "ComplexRational":
        return ComplexRational(-self.re, -self.im)

    def __bool__(self) -> bool:
        return bool(self.re or self.im)

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"

    def to_json(self) -> dict:
        return {"re": str(self.re), "im": str(self.im)}


ZERO = ComplexRational()


def _parse_rat(x, path: str) -> Fraction:
    if isinstance(x, bool):
        raise ValueError(f"{path}: expected a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"{path}: cannot read {x!r} as a rational") from None
    if isinstance(x, dict) and set(x) == {"num", "den"}:
        if not isinstance(x["num"], int) or not isinstance(x["den"], int) or x["den"] <= 0:
            raise ValueError(f"{path}: malformed rational {x}")
        return Fraction(x["num"], x["den"])
    raise ValueError(f"{path}: expected an integer, a 'p/q' string or {{num, den}}, got {x!r}")


def _parse_complex(x, path: str) -> ComplexRational:
    if isinstance(x, dict) and ("re" in x or "im" in x):
        extra = set(x) - {"re", "im"}
        if extra:
            raise ValueError(f"{path}/{sorted(extra)[0]}: unexpected field")
        return ComplexRational(_parse_rat(x.get("re", 0), f"{path}/re"), _parse_rat(x.get("im", 0), f"{path}/im"))
    return ComplexRational(_parse_rat(x, path))


@dataclass(frozen=True)
class ResidueAssignment:
    edges: dict[str, ComplexRational] = field(default_factory=dict)
    marks: dict[str, ComplexRational] = field(default_factory=dict)

    @classmethod
    def zeros(cls, graph: LevelGraph) -> "ResidueAssignment":
        return cls(
            {e.id: ZERO for e in graph.edges},
            {m.id: ZERO for m in graph.markings if m.order < 0},
        )

    @classmethod
    def from_dict(cls, doc) -> "ResidueAssignment":
        if not isinstance(doc, dict):
            raise ValueError("/: expected an object with 'edges' and 'marks'")
        extra = set(doc) - {"edges", "marks"}
        if extra:
            raise ValueError(f"/{sorted(extra)[0]}: unexpected field")
        out = {}
        for key in ("edges", "marks"):
            part = doc.get(key, {})
            if not isinstance(part, dict):
                raise ValueError(f"/{key}: expected an object")
            out[key] = {k: _parse_complex(v, f"/{key}/{k}") for k, v in part.items()}
        return cls(out["edges"], out["marks"])

    @classmethod
    def from_json(cls, text: str) -> "ResidueAssignment":
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        return {
            "edges": {k: v.to_json() for k, v in sorted(self.edges.items())},
            "marks": {k: v.to_json() for k, v in sorted(self.marks.items())},
        }


@dataclass(frozen=True)
class ResidueReport:
    vertex_violations: tuple[tuple[str, int, ComplexRational], ...] = ()
    grc_violations: tuple[tuple[int, frozenset[str], ComplexRational], ...] = ()
    semistable_violations: tuple[tuple[str, str], ...] = ()

    @property
    def ok(self) -> bool:
        return not (self.vertex_violations or self.grc_violations or self.semistable_violations)

    def merge(self, other: "ResidueReport") -> "ResidueReport":
        return ResidueReport(
            self.vertex_violations + other.vertex_violations,
            self.grc_violations + other.grc_violations,
            self.semistable_violations + other.semistable_violations,
        )

    def to_dict(self) -> dict:
        return {
            "status": "pass" if self.ok else "fail",
            "vertex_violations": [
                {"vertex": v, "level": k, "sum": s.to_json()} for v, k, s in self.vertex_violations
            ],
            "grc_violations": [
                {"level": k, "component": sorted(y), "sum": s.to_json()} for k, y, s in self.grc_violations
            ],
            "semistable_violations": [{"vertex": v, "edge": e} for v, e in self.semistable_violations],
        }


def polar_loci(graph: LevelGraph) -> tuple[list[str], list[str]]:
    """Edge ids and marked-pole ids that carry residues."""
    return [e.id for e in graph.edges], [m.id for m in graph.markings if m.order < 0]


def _require_valid(graph: LevelGraph) -> None:
    report = validate(graph)
    if not report.valid:
        raise InvalidInput(report)


def _check_complete(graph: LevelGraph, r: ResidueAssignment) -> None:
    edge_loci, mark_loci = polar_loci(graph)
    for locus in edge_loci:
        if locus not in r.edges:
            raise MissingResidue(locus)
    for locus in mark_loci:
        if locus not in r.marks:
            raise MissingResidue(locus)
    for locus in sorted(set(r.edges) - set(edge_loci)):
        raise UnknownLocus(locus)
    for locus in sorted(set(r.marks) - set(mark_loci)):
        raise UnknownLocus(locus)
    for m in graph.markings:
        if m.order == -1 and not r.marks[m.id]:
            raise SimplePoleZeroResidue(m.id)


def check_residue_theorem(graph: LevelGraph, r: ResidueAssignment) -> ResidueReport:
    _require_valid(graph)
    _check_complete(graph, r)
    vertex_bad = []
    semistable_bad = []
    for v in graph.vertices:
        up = graph.up_edges(v.id)
        poles = [m for m in graph.markings_at(v.id) if m.order < 0]
        total = ZERO
        for e in up:
            total = total + r.edges[e.id]
        for m in poles:
            total = total + r.marks[m.id]
        if total:
            vertex_bad.append((v.id, v.level, total))
        if v.kind in (CHAIN, LEAF) and len(up) == 1 and not poles and r.edges[up[0].id]:
            semistable_bad.append((v.id, up[0].id))
    return ResidueReport(vertex_violations=tuple(vertex_bad), semistable_violations=tuple(semistable_bad))


def _grc_components(graph: LevelGraph, i: int) -> list[tuple[frozenset[str], list[str]]]:
    """Components above ``i`` without marked poles, with their edges to level ``i``."""
    if i not in graph.level_table:
        raise UnknownLevel(i)
    crossing = [e.id for e in graph.edges if graph.level_of(e.upper) > i > graph.level_of(e.lower)]
    if crossing:
        raise LongEdgeCrossing(crossing, i)
    out = []
    for comp in components_above(graph, i):
        if any(m.order < 0 for v in comp for m in graph.markings_at(v)):
            continue
        edges = [e.id for e in graph.edges if e.upper in comp and graph.level_of(e.lower) == i]
        out.append((comp, edges))
    return out


def check_grc(graph: LevelGraph, i: int, r: ResidueAssignment) -> ResidueReport:
    _require_valid(graph)
    comps = _grc_components(graph, i)
    _check_complete(graph, r)
    bad = []
    for comp, edges in comps:
        total = ZERO
        for eid in edges:
            total = total + r.edges[eid]
        if total:
            bad.append((i, comp, total))
    return ResidueReport(grc_violations=tuple(bad))


def check_residues(graph: LevelGraph, i: int, r: ResidueAssignment) -> ResidueReport:
    return check_residue_theorem(graph, r).merge(check_grc(graph, i, r))


@dataclass(frozen=True)
class LinearSystem:
    unknowns: tuple[str, ...]
    rows: tuple[tuple[Fraction, ...], ...]
    row_labels: tuple[str, ...]
    kernel_dim: int
    basis: tuple[tuple[Fraction, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.unknowns) - self.kernel_dim

    def admits(self, values: dict[str, Fraction]) -> bool:
        """Whether the (real) vector ``values`` lies in the kernel."""
        x = [Fraction(values.get(u, 0)) for u in self.unknowns]
        return all(sum(a * b for a, b in zip(row, x)) == 0 for row in self.rows)

    def admits_assignment(self, r: ResidueAssignment) -> bool:
        re = {k: v.re for k, v in r.edges.items()}
        im = {k: v.im for k, v in r.edges.items()}
        return self.admits(re) and self.admits(im)

    def forced_zero(self) -> list[str]:
        """Unknowns that vanish on the whole kernel."""
        return [u for n, u in enumerate(self.unknowns) if all(b[n] == 0 for b in self.basis)]

    def to_dict(self) -> dict:
        return {
            "unknowns": list(self.unknowns),
            "rows": [{"label": lab, "coefficients": [str(c) for c in row]} for lab, row in zip(self.row_labels, self.rows)],
            "kernel_dim": self.kernel_dim,
            "basis": [[str(c) for c in b] for b in self.basis],
        }


def residue_solution_space(graph: LevelGraph, i: int, grc: bool = True) -> LinearSystem:
    """Homogeneous system whose kernel is the set of edge residues passing the
    residue theorem and, when ``grc`` is set, the GRC at level ``i``."""
    _require_valid(graph)
    poles = [m.id for m in graph.markings if m.order < 0]
    if poles:
        raise MarkedPolesPresent(poles)
    comps = _grc_components(graph, i)
    unknowns = tuple(e.id for e in graph.edges)
    col = {u: n for n, u in enumerate(unknowns)}
    rows, labels = [], []
    for v in graph.vertices:
        up = graph.up_edges(v.id)
        if not up:
            continue
        row = [0] * len(unknowns)
        for e in up:
            row[col[e.id]] += 1
        rows.append(tuple(row))
        labels.append(f"residue theorem at {v.id}")
    if grc:
        for comp, edges in comps:
            row = [0] * len(unknowns)
            for eid in edges:
                row[col[eid]] += 1
            rows.append(tuple(row))
            labels.append(f"GRC at level {i} for {{{', '.join(sorted(comp))}}}")
    basis = nullspace(rows, len(unknowns))
    if rank(rows, len(unknowns)) + len(basis) != len(unknowns):
        raise InternalInvariantViolation("rank-nullity failed on the residue system")
    return LinearSystem(unknowns, tuple(rows), tuple(labels), len(basis), tuple(tuple(b) for b in basis))
