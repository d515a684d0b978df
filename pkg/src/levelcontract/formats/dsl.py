"""Line-oriented text format for level graphs.

Grammar (whitespace-insensitive, ``#`` comments to end of line)::

    file     := "graph" "{" item* "}"
    item     := vertex | edge | mark | levels
    vertex   := "vertex" ID "{" "genus" INT "," "level" INT ("," "kind" KIND)? "}"
    edge     := "edge" ID ID "->" ID "{" "slope" INT "," "length" RAT "}"
    mark     := "mark" ID "on" ID "{" "order" INT "}"
    levels   := "levels" "{" (INT ":" RAT ("," INT ":" RAT)*)? "}"
    KIND     := "stable" | "chain" | "leaf"
    RAT      := INT ("/" INT)?

The first vertex of an edge is the upper endpoint.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..errors import LevelContractError
from ..levelgraph import KINDS, STABLE, Edge, LevelGraph, Marking, Vertex

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<arrow>->)
  | (?P<int>-?[0-9]+)
  | (?P<id>[A-Za-z_][A-Za-z0-9_']*(?:[@:.]-?[A-Za-z0-9_']+)*)
  | (?P<punct>[{}:,/])
    """,
    re.VERBOSE,
)

KEYWORDS = {"graph", "vertex", "edge", "mark", "levels", "on", "genus", "level", "kind", "slope", "length", "order"}


class FormatError(LevelContractError):
    """Base for malformed DSL or JSON input."""


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    length: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class ParseError(FormatError):
    def __init__(self, span: SourceSpan, expected: str, found: str, code: str = "Syntax"):
        self.span = span
        self.expected = expected
        self.found = found
        self.code = code
        super().__init__(self.message)

    @property
    def message(self) -> str:
        return f"{self.span}: {self.code}: expected {self.expected}, found {self.found}"


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "id", "arrow", "punct", "eof"
    text: str
    span: SourceSpan

    def describe(self) -> str:
        if self.kind == "eof":
            return "end of input"
        return repr(self.text)


def tokenize(source: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            span = SourceSpan(line, pos - line_start + 1, 1)
            raise ParseError(span, "a token", repr(source[pos]), code="BadCharacter")
        kind = m.lastgroup
        text = m.group()
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, text, SourceSpan(line, pos - line_start + 1, len(text))))
        pos = m.end()
    tokens.append(Token("eof", "", SourceSpan(line, pos - line_start + 1, 0)))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.toks = tokenize(source)
        self.pos = 0

    @property
    def cur(self) -> Token:
        return self.toks[self.pos]

    def fail(self, expected, tok=None, code="Syntax"):
        tok = tok or self.cur
        raise ParseError(tok.span, expected, tok.describe(), code)

    def take(self) -> Token:
        tok = self.cur
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        if self.cur.text != text or self.cur.kind == "eof":
            self.fail(repr(text))
        return self.take()

    def ident(self, what="an identifier") -> Token:
        if self.cur.kind != "id" or self.cur.text in KEYWORDS:
            self.fail(what)
        return self.take()

    def integer(self) -> tuple[int, Token]:
        if self.cur.kind != "int":
            self.fail("an integer")
        tok = self.take()
        return int(tok.text), tok

    def rational(self) -> tuple[Fraction, Token]:
        num, tok = self.integer()
        if self.cur.text == "/":
            self.take()
            den, dtok = self.integer()
            if den <= 0:
                raise ParseError(dtok.span, "a positive denominator", dtok.describe(), "BadRational")
            return Fraction(num, den), tok
        return Fraction(num), tok

    def parse(self) -> LevelGraph:
        self.expect("graph")
        self.expect("{")
        vertices: dict[str, tuple[Vertex, Token, Token]] = {}
        edges: dict[str, tuple[str, Token, str, Token, int, Fraction]] = {}
        marks: dict[str, tuple[str, Token, int]] = {}
        levels: dict[int, Fraction] = {}
        while self.cur.text != "}" or self.cur.kind == "eof":
            kw = self.cur
            if kw.text == "vertex":
                self.take()
                name = self.ident("a vertex id")
                if name.text in vertices:
                    self.fail("a fresh vertex id", name, "DuplicateId")
                self.expect("{")
                self.expect("genus")
                genus, _ = self.integer()
                self.expect(",")
                self.expect("level")
                level, ltok = self.integer()
                kind = STABLE
                if self.cur.text == ",":
                    self.take()
                    self.expect("kind")
                    ktok = self.take()
                    if ktok.text not in KINDS:
                        raise ParseError(ktok.span, " | ".join(KINDS), ktok.describe(), "Syntax")
                    kind = ktok.text
                self.expect("}")
                vertices[name.text] = (Vertex(name.text, genus, level, kind), name, ltok)
            elif kw.text == "edge":
                self.take()
                name = self.ident("an edge id")
                if name.text in edges:
                    self.fail("a fresh edge id", name, "DuplicateId")
                up = self.ident("a vertex id")
                self.expect("->")
                lo = self.ident("a vertex id")
                self.expect("{")
                self.expect("slope")
                slope, _ = self.integer()
                self.expect(",")
                self.expect("length")
                length, _ = self.rational()
                self.expect("}")
                edges[name.text] = (up.text, up, lo.text, lo, slope, length)
            elif kw.text == "mark":
                self.take()
                name = self.ident("a marking id")
                if name.text in marks:
                    self.fail("a fresh marking id", name, "DuplicateId")
                self.expect("on")
                at = self.ident("a vertex id")
                self.expect("{")
                self.expect("order")
                order, _ = self.integer()
                self.expect("}")
                marks[name.text] = (at.text, at, order)
            elif kw.text == "levels":
                self.take()
                self.expect("{")
                if self.cur.text != "}":
                    while True:
                        k, ktok = self.integer()
                        if k in levels:
                            self.fail("a fresh level index", ktok, "DuplicateLevel")
                        self.expect(":")
                        levels[k], _ = self.rational()
                        if self.cur.text != ",":
                            break
                        self.take()
                self.expect("}")
            else:
                self.fail("'vertex', 'edge', 'mark', 'levels' or '}'")
        self.expect("}")
        if self.cur.kind != "eof":
            self.fail("end of input")

        for up, utok, lo, ltok, _, _ in edges.values():
            for name, tok in ((up, utok), (lo, ltok)):
                if name not in vertices:
                    self.fail("a declared vertex", tok, "UndeclaredVertex")
        for at, atok, _ in marks.values():
            if at not in vertices:
                self.fail("a declared vertex", atok, "UndeclaredVertex")
        for v, _, ltok in vertices.values():
            if v.level not in levels:
                self.fail(f"an entry for level {v.level} in the levels block", ltok, "MissingLevel")
        return LevelGraph(
            vertices=tuple(v for v, _, _ in vertices.values()),
            edges=tuple(Edge(i, u, l, s, a) for i, (u, _, l, _, s, a) in edges.items()),
            markings=tuple(Marking(i, at, o) for i, (at, _, o) in marks.items()),
            levels=levels,
        )


def parse(source: str) -> LevelGraph:
    """Parse DSL text into a structurally well-formed graph (not validated)."""
    return _Parser(source).parse()


def _rat(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def to_text(graph: LevelGraph) -> str:
    """Inverse of :func:`parse`; output is deterministic."""
    lines = ["graph {"]
    for v in graph.vertices:
        kind = "" if v.kind == STABLE else f", kind {v.kind}"
        lines.append(f"  vertex {v.id} {{ genus {v.genus}, level {v.level}{kind} }}")
    for e in graph.edges:
        lines.append(f"  edge {e.id} {e.upper} -> {e.lower} {{ slope {e.slope}, length {_rat(e.length)} }}")
    for m in graph.markings:
        lines.append(f"  mark {m.id} on {m.vertex} {{ order {m.order} }}")
    entries = ", ".join(f"{k}: {_rat(ell)}" for k, ell in graph.levels)
    lines.append(f"  levels {{ {entries} }}")
    lines.append("}")
    return "\n".join(lines) + "\n"
