"""Graphviz DOT export: one ``rank=same`` cluster per level, top level first."""

from __future__ import annotations

from ..levelgraph import LevelGraph
from .dsl import _rat


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(graph: LevelGraph, twist=None) -> str:
    """Render ``graph``; with ``twist`` (a TwistData) each level label shows c(j)."""
    out = ["digraph levelgraph {", "  rankdir=TB;", "  node [shape=ellipse];"]
    for k, ell in graph.levels:
        label = f"level {k}  ell={_rat(ell)}"
        if twist is not None:
            label += f"  c={_rat(twist.multiplicity(k))}"
        out.append(f"  subgraph {_q(f'level_{k}')} {{")
        out.append("    rank=same;")
        out.append(f"    {_q(f'level:{k}')} [shape=plaintext, label={_q(label)}];")
        for v in graph.vertices_at(k):
            out.append(f"    {_q(v.id)} [label={_q(f'{v.id} g={v.genus} [{v.kind}]')}];")
            for m in graph.markings_at(v.id):
                out.append(f"    {_q('mark:' + m.id)} [shape=box, label={_q(f'{m.id} m={m.order}')}];")
        out.append("  }")
    levels = graph.level_indices
    for hi, lo in zip(levels, levels[1:]):
        out.append(f"  {_q(f'level:{hi}')} -> {_q(f'level:{lo}')} [style=invis];")
    for e in graph.edges:
        out.append(f"  {_q(e.upper)} -> {_q(e.lower)} [label={_q(f'κ={e.slope} a={_rat(e.length)}')}];")
    for m in graph.markings:
        out.append(f"  {_q(m.vertex)} -> {_q('mark:' + m.id)} [arrowhead=none, style=dashed];")
    out.append("}")
    return "\n".join(out) + "\n"
