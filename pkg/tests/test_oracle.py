import itertools
from fractions import Fraction

import pytest

from levelcontract.contract import test_configuration as make_test_configuration
from levelcontract.contract import twisted_degree
from levelcontract.levelgraph import Edge, LevelGraph, Marking, Vertex, arithmetic_genus, signature, validate
from levelcontract.modify import semistable_modification
from levelcontract.oracle import (
    EnumerationBounds,
    canonical_form,
    canonicalize,
    enumerate_valid_graphs,
    recompute_twisted_degree_bruteforce,
    recompute_twisted_degrees_bruteforce,
)


def forms(bounds):
    return [canonical_form(g) for g in enumerate_valid_graphs(bounds)]


def test_contains_g1(g1):
    bounds = EnumerationBounds(max_vertices=2, max_edges=1, max_genus=2, max_slope=2, max_order=3, max_levels=2)
    assert canonical_form(g1) in forms(bounds)


def test_zero_bounds_empty():
    zero = EnumerationBounds(0, 0, 0, 0, 0, 0, max_step=0, min_order=0, max_markings_per_vertex=0)
    assert list(enumerate_valid_graphs(zero)) == []


def test_contains_g2(g2):
    bounds = EnumerationBounds(max_vertices=3, max_edges=3, max_genus=2, max_slope=2, max_order=5, max_levels=3)
    assert canonical_form(g2) in forms(bounds)


def test_bounds_checked():
    with pytest.raises(ValueError):
        EnumerationBounds(max_vertices=-1)
    with pytest.raises(ValueError):
        EnumerationBounds(min_order=-1)


def test_stream_is_valid_sorted_and_unique(small_graphs):
    keys = [canonical_form(g) for g in small_graphs]
    assert len(set(keys)) == len(keys)
    assert all(validate(g).valid for g in small_graphs)
    assert keys == sorted(keys)
    assert all(canonicalize(g) == g for g in small_graphs)


def test_deterministic():
    b = EnumerationBounds(max_vertices=3, max_edges=2)
    assert list(enumerate_valid_graphs(b)) == list(enumerate_valid_graphs(b))


def _naive(bounds):
    """Filter every labeled candidate through validate, keep canonical forms."""
    out = set()
    for n in range(1, bounds.max_vertices + 1):
        for k in range(1, bounds.max_levels + 1):
            for steps in itertools.product(range(1, bounds.max_step + 1), repeat=k - 1):
                ell = list(itertools.accumulate(steps, initial=0))
                table = {-j: Fraction(ell[j]) for j in range(k)}
                for lv in itertools.product(range(k), repeat=n):
                    for genera in itertools.product(range(bounds.max_genus + 1), repeat=n):
                        verts = [Vertex(f"v{x}", genera[x], -lv[x]) for x in range(n)]
                        pairs = [(u, w) for u in range(n) for w in range(n) if lv[u] < lv[w]]
                        items = [(u, w, s) for u, w in pairs for s in range(1, bounds.max_slope + 1)]
                        for ne in range(bounds.max_edges + 1):
                            for combo in itertools.combinations_with_replacement(items, ne):
                                edges = [
                                    Edge(f"e{j}", f"v{u}", f"v{w}", s, (table[-lv[w]] - table[-lv[u]]) / s)
                                    for j, (u, w, s) in enumerate(combo)
                                ]
                                choices = [None] + list(range(bounds.min_order, bounds.max_order + 1))
                                for orders in itertools.product(choices, repeat=n):
                                    marks = [Marking(f"z{x}", f"v{x}", m) for x, m in enumerate(orders) if m is not None]
                                    g = LevelGraph(tuple(verts), tuple(edges), tuple(marks), table)
                                    if validate(g).valid:
                                        out.add(canonical_form(g))
    return out


@pytest.mark.parametrize(
    "bounds",
    [
        EnumerationBounds(max_vertices=2, max_edges=2, max_genus=1, max_slope=2, max_order=3, max_levels=2),
        EnumerationBounds(max_vertices=3, max_edges=2, max_genus=1, max_slope=1, max_order=2, max_levels=2, max_step=1),
        EnumerationBounds(max_vertices=2, max_edges=1, max_genus=2, max_slope=3, max_order=4, max_levels=2, max_step=3),
    ],
)
def test_exhaustive_against_naive_filter(bounds):
    assert set(forms(bounds)) == _naive(bounds)


def test_canonical_form_ignores_ids(g2):
    rename = {"v0": "top", "v1": "mid", "v2": "a"}
    h = LevelGraph(
        tuple(Vertex(rename[v.id], v.genus, v.level, v.kind) for v in g2.vertices),
        tuple(Edge("x" + e.id, rename[e.upper], rename[e.lower], e.slope, e.length) for e in g2.edges),
        tuple(Marking("m" + m.id, rename[m.vertex], m.order) for m in g2.markings),
        dict(g2.levels),
    )
    assert h != g2 and canonical_form(h) == canonical_form(g2)
    assert canonicalize(h) == canonicalize(g2)
    assert validate(canonicalize(g2)).valid
    assert arithmetic_genus(canonicalize(g2)) == 5 and signature(canonicalize(g2)) == [1, 2, 5]


def test_canonical_form_separates(g1, g1p):
    assert canonical_form(g1) != canonical_form(g1p)


def test_bruteforce_examples(g1p):
    assert recompute_twisted_degree_bruteforce(g1p, -1, "v0") == 0
    assert recompute_twisted_degree_bruteforce(g1p, -1, "v1") == 3
    t = make_test_configuration([1, 3])
    assert recompute_twisted_degree_bruteforce(t, -1, "center") == 0


def test_bruteforce_agrees(small_graphs):
    for g in small_graphs:
        for i in g.level_indices:
            brute = recompute_twisted_degrees_bruteforce(g, i)
            for v in g.vertices:
                assert twisted_degree(g, i, v.id) == brute[v.id] == recompute_twisted_degree_bruteforce(g, i, v.id)


def test_end_to_end_shadow(small_graphs):
    for g in small_graphs:
        assert sum(signature(g)) == 2 * arithmetic_genus(g) - 2
        for i in g.level_indices:
            h, _ = semistable_modification(g, i)
            brute = recompute_twisted_degrees_bruteforce(h, i)
            assert all(brute[v.id] == 0 for v in h.vertices if v.level > i)
