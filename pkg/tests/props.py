"""Per-graph property checks shared by the property tests and the acceptance suite."""

from __future__ import annotations

from levelcontract import formats
from levelcontract.contract import check_contractibility, twisted_degree, twisted_degrees
from levelcontract.levelgraph import arithmetic_genus, signature
from levelcontract.modify import semistable_modification
from levelcontract.oracle import canonical_form, recompute_twisted_degrees_bruteforce
from levelcontract.residues import residue_solution_space

PROPERTIES = ("a", "b", "c", "d", "e", "f")


def degrees_agree(g, i) -> bool:
    brute = recompute_twisted_degrees_bruteforce(g, i)
    return all(twisted_degree(g, i, v.id) == brute[v.id] for v in g.vertices)


def total_degree_ok(g, i) -> bool:
    return sum(twisted_degrees(g, i).values()) == 2 * arithmetic_genus(g) - 2


def check_graph(g) -> dict[str, list[int]]:
    """Failing levels per property (a)-(f); empty lists mean all pass."""
    fails = {p: [] for p in PROPERTIES}
    pa, sig = arithmetic_genus(g), signature(g)
    for i in g.level_indices:
        if any(m.order < 0 and g.level_of(m.vertex) > i for m in g.markings):
            continue
        mini, _ = semistable_modification(g, i, "minimal")
        full, _ = semistable_modification(g, i, "full")
        mods = (mini, full)
        if any(arithmetic_genus(h) != pa or signature(h) != sig for h in mods):
            fails["a"].append(i)
        if any(check_contractibility(h, i) or any(d != 0 for v, d in twisted_degrees(h, i).items() if h.vertex(v).level > i) for h in mods):
            fails["b"].append(i)
        if not all(total_degree_ok(h, i) for h in (g,) + mods):
            fails["c"].append(i)
        if any(
            canonical_form(semistable_modification(h, i, mode)[0]) != canonical_form(h)
            for h, mode in ((mini, "minimal"), (full, "full"))
        ):
            fails["d"].append(i)
        if not all(degrees_agree(h, i) for h in (g,) + mods):
            fails["e"].append(i)
        if residue_solution_space(mini, i).kernel_dim != residue_solution_space(full, i).kernel_dim:
            fails["f"].append(i)
    return fails


def round_trips(g) -> bool:
    return formats.parse(formats.to_text(g)) == g and formats.from_json(formats.to_json(g)) == g
