"""Command-line front end: ``levelcontract <command> ...``.

Exit codes: 0 success, 1 validation failure, 2 parse error, 3 contraction
obstruction, 4 residue-check failure, 5 internal invariant violation.  In
batch mode each file is processed independently and the exit code is the
maximum over files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import formats
from .contract import check_contractibility, contract, test_configuration, twist_multiplicities
from .errors import (
    InternalInvariantViolation,
    LevelContractError,
    LongEdgeCrossing,
    MarkedPoleAbove,
    OddSignatureSum,
)
from .levelgraph import LevelGraph, validate
from .modify import semistable_modification
from .oracle import EnumerationBounds, enumerate_valid_graphs
from .residues import ResidueAssignment, check_residues, residue_solution_space

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PARSE = 2
EXIT_OBSTRUCTED = 3
EXIT_RESIDUE = 4
EXIT_INTERNAL = 5


class _Out:
    def __init__(self, stream):
        self.stream = stream
        env = os.environ.get("LEVELCONTRACT_COLOR")
        if env is not None:
            self.color = env != "0"
        else:
            self.color = hasattr(stream, "isatty") and stream.isatty()

    def paint(self, text: str, code: str) -> str:
        return f"\x1b[{code}m{text}\x1b[0m" if self.color else text

    def good(self, text):
        return self.paint(text, "32")

    def bad(self, text):
        return self.paint(text, "31")

    def line(self, text=""):
        self.stream.write(text + "\n")

    def json(self, obj):
        self.stream.write(json.dumps(obj, sort_keys=True) + "\n")


class _Fail(Exception):
    def __init__(self, code: int, message: str, payload: dict | None = None):
        super().__init__(message)
        self.code = code
        self.payload = payload or {}


def _rat(x: Fraction) -> str:
    return str(Fraction(x))


def read_graph(path: str) -> LevelGraph:
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        return formats.from_json(text)
    return formats.parse(text)


def _load(path: str) -> LevelGraph:
    try:
        return read_graph(path)
    except formats.ParseError as exc:
        raise _Fail(EXIT_PARSE, f"parse error at {exc.message}", {"error": "ParseError", "code": exc.code,
                    "line": exc.span.line, "column": exc.span.column, "expected": exc.expected, "found": exc.found})
    except formats.SchemaError as exc:
        raise _Fail(EXIT_PARSE, f"schema error at {exc}", {"error": "SchemaError", "path": exc.path, "message": exc.detail})
    except OSError as exc:
        raise _Fail(EXIT_PARSE, f"cannot read: {exc.strerror}", {"error": "ReadError", "message": str(exc)})


def _require_valid(graph: LevelGraph) -> None:
    report = validate(graph)
    if not report.valid:
        raise _Fail(
            EXIT_INVALID,
            "invalid graph: " + ", ".join(f"{v.code} ({v.location})" for v in report.violations),
            {"error": "InvalidInput", **report.to_dict()},
        )


def _maybe_modify(graph: LevelGraph, args) -> tuple[LevelGraph, object]:
    if not getattr(args, "modify", False):
        return graph, None
    try:
        return semistable_modification(graph, args.level, args.mode)
    except MarkedPoleAbove as exc:
        raise _Fail(EXIT_OBSTRUCTED, str(exc), {"error": "MarkedPoleAbove", "marking": exc.marking, "level": exc.level})


def _write_graph(graph: LevelGraph, out_path: str | None, as_json: bool, out: _Out, header: list[str] = ()) -> None:
    text = formats.to_json(graph) if as_json else formats.to_text(graph)
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
    else:
        for h in header:
            out.line(f"# {h}")
        out.stream.write(text)


# commands


def cmd_validate(path: str, args, out: _Out) -> int:
    graph = _load(path)
    report = validate(graph)
    if args.json:
        out.json({"file": path, **report.to_dict()})
    else:
        out.line(f"{path}: " + (out.good("valid") if report.valid else out.bad("invalid")))
        for v in report.violations:
            out.line(f"  {v.code} at {v.location}: {v.message}")
    return EXIT_OK if report.valid else EXIT_INVALID


def _report_lines(report) -> list[str]:
    lines = [f"base change d = {report.d} (t = s^{report.d})"]
    if report.chain_vertices:
        for c in report.chain_vertices:
            lines.append(f"chain vertex {c.vertex} at level {c.level} on edge {c.source_edge}")
    for lc in report.leaf_chains:
        lines.append(f"marking {lc.marking} moved from {lc.source_vertex} via {' -> '.join(lc.vertices)}")
    if not report.chain_vertices and not report.leaf_chains:
        lines.append("no surgery needed")
    return lines


def cmd_modify(path: str, args, out: _Out) -> int:
    graph = _load(path)
    _require_valid(graph)
    try:
        new, report = semistable_modification(graph, args.level, args.mode)
    except MarkedPoleAbove as exc:
        raise _Fail(EXIT_OBSTRUCTED, str(exc), {"error": "MarkedPoleAbove", "marking": exc.marking, "level": exc.level})
    if args.json:
        if args.out:
            Path(args.out).write_text(formats.to_json(new), encoding="utf-8")
        out.json({"file": path, "level": args.level, "mode": args.mode, "graph": formats.graph_to_dict(new), "report": report.to_dict()})
    else:
        header = [f"{path}: semistable modification at level {args.level} ({args.mode})"] + _report_lines(report)
        _write_graph(new, args.out, False, out, header)
        if args.out:
            for h in header:
                out.line(h)
            out.line(f"wrote {args.out}")
    return EXIT_OK


def _contraction_dict(graph, i, result) -> dict:
    return {
        "level": i,
        "twist": {str(j): _rat(c) for j, c in result.twist.multiplicities},
        "singularities": [
            {
                "component": sorted(s.component),
                "branches": s.branches,
                "genus": s.genus,
                "delta": s.delta,
                "contacts": list(s.contacts),
                "branch_edges": list(s.branch_edges),
            }
            for s in result.singularities
        ],
        "descent_degrees": {v: _rat(d) for v, d in sorted(result.descent_degrees.items())},
        "total": result.total,
    }


def cmd_contract(path: str, args, out: _Out) -> int:
    graph = _load(path)
    _require_valid(graph)
    graph, report = _maybe_modify(graph, args)
    i = args.level
    if i not in graph.level_table:
        raise _Fail(EXIT_INVALID, f"unknown level {i}", {"error": "UnknownLevel", "level": i})
    found = check_contractibility(graph, i)
    if found:
        payload = {"error": "NotContractible", "obstructions": [{"code": o.code, "location": o.location} for o in found]}
        msg = "; ".join(f"{o.code} {o.location}" for o in found)
        fatal = any(o.fatal for o in found)
        raise _Fail(EXIT_OBSTRUCTED, f"obstructed at level {i}: {msg}" + ("" if fatal else " (try --modify)"), payload)
    result = contract(graph, i)
    if args.json:
        doc = {"file": path, **_contraction_dict(graph, i, result)}
        if report is not None:
            doc["modification"] = report.to_dict()
        out.json(doc)
        return EXIT_OK
    out.line(f"{path}: contraction at level {i}" + (" after semistable modification" if report else ""))
    twist = ", ".join(f"c({j}) = {_rat(c)}" for j, c in result.twist.multiplicities if c) or "trivial"
    out.line(f"  twist: {twist}")
    for n, s in enumerate(result.singularities, start=1):
        out.line(
            f"  singularity {n}: Y = {{{', '.join(sorted(s.component))}}}  n={s.branches}  "
            f"p_a(Y)={s.genus}  delta={s.delta}  contacts {','.join(map(str, s.contacts))}"
        )
    degs = ", ".join(f"{v}={_rat(d)}" for v, d in sorted(result.descent_degrees.items()))
    out.line(f"  descent degrees: {degs}  (total {result.total})")
    return EXIT_OK


def _load_residues(source: str, graph: LevelGraph) -> ResidueAssignment:
    if source == "zeros":
        return ResidueAssignment.zeros(graph)
    try:
        return ResidueAssignment.from_json(Path(source).read_text(encoding="utf-8"))
    except (ValueError, OSError) as exc:
        raise _Fail(EXIT_PARSE, f"cannot read residues {source}: {exc}", {"error": "ResidueFormat", "message": str(exc)})


def cmd_grc(path: str, args, out: _Out) -> int:
    graph = _load(path)
    _require_valid(graph)
    graph, _ = _maybe_modify(graph, args)
    i = args.level
    try:
        if args.solve:
            with_grc = residue_solution_space(graph, i, grc=True)
            without = residue_solution_space(graph, i, grc=False)
            if args.json:
                out.json({"file": path, "level": i, "with_grc": with_grc.to_dict(), "without_grc": without.to_dict()})
            else:
                out.line(f"{path}: residue system at level {i}, unknowns {', '.join(with_grc.unknowns) or '(none)'}")
                out.line(f"kernel dim: {with_grc.kernel_dim} (with GRC), {without.kernel_dim} (without)")
                forced = with_grc.forced_zero()
                if forced:
                    out.line(f"forced to zero: {', '.join(forced)}")
            return EXIT_OK
        r = _load_residues(args.residues, graph)
        report = check_residues(graph, i, r)
    except LongEdgeCrossing as exc:
        raise _Fail(EXIT_OBSTRUCTED, f"{exc}", {"error": "LongEdgeCrossing", "edges": list(exc.edges), "level": i})
    except LevelContractError as exc:
        if isinstance(exc, InternalInvariantViolation):
            raise
        raise _Fail(EXIT_RESIDUE, str(exc), {"error": type(exc).__name__, "message": str(exc)})
    if args.json:
        out.json({"file": path, "level": i, **report.to_dict()})
    else:
        out.line(f"{path}: residues at level {i}: " + (out.good("pass") if report.ok else out.bad("fail")))
        for v, k, s in report.vertex_violations:
            out.line(f"  residue theorem fails at {v} (level {k}): sum {s}")
        for k, y, s in report.grc_violations:
            out.line(f"  GRC fails at level {k} for {{{', '.join(sorted(y))}}}: sum {s}")
        for v, e in report.semistable_violations:
            out.line(f"  semistable vertex {v} has nonzero residue on {e}")
    return EXIT_OK if report.ok else EXIT_RESIDUE


def cmd_testconfig(args, out: _Out) -> int:
    try:
        mu = [int(x) for x in args.mu.replace(" ", "").split(",") if x]
        graph = test_configuration(mu)
    except OddSignatureSum as exc:
        raise _Fail(EXIT_INVALID, str(exc), {"error": "OddSignatureSum", "mu": list(exc.mu)})
    except ValueError as exc:
        raise _Fail(EXIT_INVALID, str(exc), {"error": "BadSignature", "message": str(exc)})
    _write_graph(graph, args.out, args.json, out)
    return EXIT_OK


def cmd_export(path: str, args, out: _Out) -> int:
    graph = _load(path)
    if args.dot:
        twist = None
        if args.twist_level is not None:
            if args.twist_level not in graph.level_table:
                raise _Fail(EXIT_INVALID, f"unknown level {args.twist_level}", {"error": "UnknownLevel"})
            twist = twist_multiplicities(graph, args.twist_level)
        out.stream.write(formats.to_dot(graph, twist))
    elif args.json:
        out.stream.write(formats.to_json(graph))
    else:
        out.stream.write(formats.to_text(graph))
    return EXIT_OK


def cmd_enumerate(args, out: _Out) -> int:
    bounds = EnumerationBounds(
        max_vertices=args.max_vertices,
        max_edges=args.max_edges,
        max_genus=args.max_genus,
        max_slope=args.max_slope,
        max_order=args.max_order,
        max_levels=args.max_levels,
        max_step=args.max_step,
    )
    n = 0
    for g in enumerate_valid_graphs(bounds):
        n += 1
        if args.count:
            continue
        if args.json:
            out.json(formats.graph_to_dict(g))
        else:
            out.stream.write(formats.to_text(g))
    if args.count:
        out.line(str(n))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="levelcontract", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def files(sp):
        sp.add_argument("files", nargs="+", metavar="FILE", help="graph file (DSL or JSON), '-' for stdin")
        sp.add_argument("--json", action="store_true", help="machine-readable output")

    def level(sp, required=True):
        sp.add_argument("--level", type=int, required=required, help="target level index (0, -1, ...)")

    sp = sub.add_parser("validate", help="check the level-graph axioms")
    files(sp)

    sp = sub.add_parser("modify", help="semistable modification")
    files(sp)
    level(sp)
    sp.add_argument("--mode", choices=["minimal", "full"], default="minimal")
    sp.add_argument("--out", help="write the modified graph here")

    sp = sub.add_parser("contract", help="contraction analysis at a level")
    files(sp)
    level(sp)
    sp.add_argument("--modify", action="store_true", help="run the semistable modification first")
    sp.add_argument("--mode", choices=["minimal", "full"], default="minimal")

    sp = sub.add_parser("grc", help="residue theorem and global residue condition")
    files(sp)
    level(sp)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--residues", help="residue assignment JSON, or 'zeros'")
    g.add_argument("--solve", action="store_true", help="report the admissible residue space")
    sp.add_argument("--modify", action="store_true", help="run the semistable modification first")
    sp.add_argument("--mode", choices=["minimal", "full"], default="minimal")

    sp = sub.add_parser("testconfig", help="test-configuration graph for a signature")
    sp.add_argument("--mu", required=True, help="comma-separated zero orders, e.g. 1,3")
    sp.add_argument("--out", help="write the graph here")
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("export", help="serialize a graph")
    sp.add_argument("files", nargs="+", metavar="FILE")
    fmt = sp.add_mutually_exclusive_group(required=True)
    fmt.add_argument("--dot", action="store_true")
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--text", action="store_true")
    sp.add_argument("--twist-level", type=int, help="annotate DOT levels with twist multiplicities")

    sp = sub.add_parser("enumerate", help="list all valid graphs within bounds")
    sp.add_argument("--max-vertices", type=int, default=2)
    sp.add_argument("--max-edges", type=int, default=1)
    sp.add_argument("--max-genus", type=int, default=1)
    sp.add_argument("--max-slope", type=int, default=2)
    sp.add_argument("--max-order", type=int, default=3)
    sp.add_argument("--max-levels", type=int, default=2)
    sp.add_argument("--max-step", type=int, default=2)
    sp.add_argument("--count", action="store_true", help="print only the number of graphs")
    sp.add_argument("--json", action="store_true", help="one JSON graph per line")
    return p


PER_FILE = {
    "validate": cmd_validate,
    "modify": cmd_modify,
    "contract": cmd_contract,
    "grc": cmd_grc,
    "export": cmd_export,
}


def _run_one(fn, out: _Out, args, *a) -> int:
    try:
        return fn(*a, args, out)
    except _Fail as exc:
        if getattr(args, "json", False):
            out.json({"file": a[0] if a else None, "exit": exc.code, **exc.payload})
        else:
            where = f"{a[0]}: " if a else ""
            sys.stderr.write(f"{where}{exc}\n")
        return exc.code
    except InternalInvariantViolation as exc:
        sys.stderr.write(f"internal invariant violated: {exc}\n")
        return EXIT_INTERNAL
    except LevelContractError as exc:
        # e.g. an unknown level index; the input itself was readable
        if getattr(args, "json", False):
            out.json({"file": a[0] if a else None, "exit": EXIT_INVALID, "error": type(exc).__name__, "message": str(exc)})
        else:
            where = f"{a[0]}: " if a else ""
            sys.stderr.write(f"{where}{exc}\n")
        return EXIT_INVALID


def main(argv=None, stdout=None) -> int:
    args = build_parser().parse_args(argv)
    out = _Out(stdout or sys.stdout)
    if args.command in PER_FILE:
        if getattr(args, "out", None) and len(args.files) > 1:
            sys.stderr.write("--out needs a single input file\n")
            return EXIT_PARSE
        return max(_run_one(PER_FILE[args.command], out, args, path) for path in args.files)
    if args.command == "testconfig":
        return _run_one(cmd_testconfig, out, args)
    return _run_one(cmd_enumerate, out, args)


if __name__ == "__main__":
    sys.exit(main())
