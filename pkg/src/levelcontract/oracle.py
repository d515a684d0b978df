"""Brute-force oracles: exhaustive enumeration of small valid level graphs,
canonical forms up to relabeling, and an independent recomputation of the
twisted degree."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .levelgraph import STABLE, Edge, LevelGraph, Marking, Vertex


@dataclass(frozen=True)
class EnumerationBounds:
    max_vertices: int = 2
    max_edges: int = 1
    max_genus: int = 1
    max_slope: int = 2
    max_order: int = 3
    max_levels: int = 2
    # steps ell(j - 1) - ell(j) range over 1..max_step
    max_step: int = 2
    # marking orders range over min_order..max_order, at most this many per vertex
    min_order: int = 1
    max_markings_per_vertex: int = 1

    def __post_init__(self):
        for name in ("max_vertices", "max_edges", "max_genus", "max_slope", "max_order", "max_levels"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.min_order < 0:
            raise ValueError("min_order must be >= 0 (marked poles are not enumerated)")
        if self.max_markings_per_vertex < 0:
            raise ValueError("max_markings_per_vertex must be >= 0")


def _raw(graph: LevelGraph):
    index = {v.id: n for n, v in enumerate(graph.vertices)}
    verts = [
        (-v.level, v.genus, v.kind, tuple(sorted(m.order for m in graph.markings_at(v.id)))) for v in graph.vertices
    ]
    edges = [(index[e.upper], index[e.lower], e.slope, e.length) for e in graph.edges]
    return verts, edges


def _canonical_raw(verts, edges) -> tuple[tuple, list[int]]:
    """Least edge encoding over relabelings that sort the vertex keys.

    Returns ``(encoding, order)`` where ``order[k]`` is the old index of the
    vertex that receives new index ``k``.
    """
    keyed = sorted(range(len(verts)), key=lambda n: verts[n])
    groups = [list(g) for _, g in itertools.groupby(keyed, key=lambda n: verts[n])]
    best, best_order = None, keyed
    for perm in itertools.product(*(itertools.permutations(g) for g in groups)):
        order = [n for g in perm for n in g]
        new = [0] * len(order)
        for k, n in enumerate(order):
            new[n] = k
        enc = tuple(sorted((new[u], new[w], s, a) for u, w, s, a in edges))
        if best is None or enc < best:
            best, best_order = enc, order
    return (tuple(verts[n] for n in best_order), best or ()), best_order


def canonical_form(graph: LevelGraph) -> tuple:
    """Lexicographically least encoding over vertex relabelings."""
    verts, edges = _raw(graph)
    key, _ = _canonical_raw(verts, edges)
    return (graph.levels,) + key


def canonicalize(graph: LevelGraph) -> LevelGraph:
    """Relabel with ids ``v0, v1, ...``, ``e0, ...``, ``z0, ...`` in canonical order."""
    verts, edges = _raw(graph)
    (vkeys, enc), _ = _canonical_raw(verts, edges)
    return _from_key(graph.levels, vkeys, enc)


def _from_key(levels, vkeys, enc) -> LevelGraph:
    return _assemble(levels, [(g, -lev, kind) for lev, g, kind, _ in vkeys], list(enc), [list(m) for *_, m in vkeys])


def _assemble(levels, verts, edges, marks) -> LevelGraph:
    width = len(str(max(len(verts), len(edges), sum(map(len, marks)), 1) - 1))
    vid = [f"v{n:0{width}d}" for n in range(len(verts))]
    vertices = tuple(Vertex(vid[n], g, lev, kind) for n, (g, lev, kind) in enumerate(verts))
    es = tuple(Edge(f"e{n:0{width}d}", vid[u], vid[w], k, a) for n, (u, w, k, a) in enumerate(edges))
    ms = []
    for n, orders in enumerate(marks):
        for m in orders:
            ms.append(Marking(f"z{len(ms):0{width}d}", vid[n], m))
    return LevelGraph(vertices, es, tuple(ms), levels)


def _multisets(total: int, lo: int, hi: int, max_parts: int | None) -> list[tuple[int, ...]]:
    """Nondecreasing tuples with entries in ``lo..hi`` summing to ``total``."""
    out: list[tuple[int, ...]] = []

    def rec(rest, smallest, acc):
        if rest == 0:
            out.append(tuple(acc))
        if max_parts is not None and len(acc) >= max_parts:
            return
        for p in range(smallest, min(hi, rest) + 1):
            acc.append(p)
            rec(rest - p, p, acc)
            acc.pop()

    if total >= 0:
        rec(total, lo, [])
    return out


def _connected(n: int, edges) -> bool:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, w, _ in edges:
        parent[find(u)] = find(w)
    return len({find(x) for x in range(n)}) == 1


def _compositions(n: int, k: int):
    """Ways to put ``n`` vertices on ``k`` levels, each level occupied."""
    for cuts in itertools.combinations(range(1, n), k - 1):
        bounds = (0,) + cuts + (n,)
        yield [bounds[j + 1] - bounds[j] for j in range(k)]


def enumerate_valid_graphs(bounds: EnumerationBounds) -> Iterator[LevelGraph]:
    """Every valid graph within ``bounds`` exactly once up to relabeling,
    in canonical-form order.  All vertices have kind ``stable``."""
    found: dict[tuple, LevelGraph] = {}
    for n in range(1, bounds.max_vertices + 1):
        for k in range(1, min(bounds.max_levels, n) + 1):
            for counts in _compositions(n, k):
                level_of = [-j for j, c in enumerate(counts) for _ in range(c)]
                pairs = [(u, w) for u in range(n) for w in range(u + 1, n) if level_of[u] > level_of[w]]
                items = [(u, w, s) for u, w in pairs for s in range(1, bounds.max_slope + 1)]
                for steps in itertools.product(range(1, bounds.max_step + 1), repeat=k - 1):
                    ell = [Fraction(0)]
                    for s in steps:
                        ell.append(ell[-1] + s)
                    levels = tuple((-j, ell[j]) for j in range(k))
                    for ne in range(0, bounds.max_edges + 1):
                        for combo in itertools.combinations_with_replacement(items, ne):
                            if not _connected(n, combo):
                                continue
                            _emit(n, level_of, levels, ell, combo, bounds, found)
    for key in sorted(found):
        yield found[key]


def _emit(n, level_of, levels, ell, combo, bounds, found) -> None:
    base = [0] * n
    for u, w, s in combo:
        base[u] -= s - 1
        base[w] += s + 1
    options = []
    for v in range(n):
        opts = []
        for g in range(bounds.max_genus + 1):
            for parts in _multisets(
                2 * g - 2 + base[v], bounds.min_order, bounds.max_order, bounds.max_markings_per_vertex
            ):
                opts.append((-level_of[v], g, STABLE, parts))
        if not opts:
            return
        options.append(opts)
    edges = [(u, w, s, (ell[-level_of[w]] - ell[-level_of[u]]) / s) for u, w, s in combo]
    for verts in itertools.product(*options):
        key, _ = _canonical_raw(list(verts), edges)
        key = (levels,) + key
        if key not in found:
            found[key] = _from_key(*key)


def recompute_twisted_degree_bruteforce(graph: LevelGraph, i: int, v: str) -> Fraction:
    """Twisted degree summed edge by edge in slope form.

    The untwisted degree comes from the orders of the level differential at
    ``v`` plus one per node.  Each edge contributes ``-kappa * f`` at its upper
    end and ``+kappa * f`` at its lower end, where ``f`` is the fraction of the
    edge, measured in vanishing order, that lies above level ``i``.
    """
    return recompute_twisted_degrees_bruteforce(graph, i)[v]


def recompute_twisted_degrees_bruteforce(graph: LevelGraph, i: int) -> dict[str, Fraction]:
    """:func:`recompute_twisted_degree_bruteforce` for every vertex at once."""
    ell = graph.level_table
    cut = ell[i]
    level = {v.id: v.level for v in graph.vertices}
    deg = {v.id: Fraction(0) for v in graph.vertices}
    for m in graph.markings:
        deg[m.vertex] += m.order
    for e in graph.edges:
        top, bottom = ell[level[e.upper]], ell[level[e.lower]]
        shift = e.slope * max(Fraction(0), min(bottom, cut) - top) / (bottom - top)
        deg[e.upper] += (e.slope - 1) + 1 - shift
        deg[e.lower] += (-e.slope - 1) + 1 + shift
    return deg
