"""One-line text forms for curves, combinatorial types and partition chains.

The grammars are documented in docs/grammar.md.  Every parser raises
:class:`ParseError` with a 1-based line and column.
"""

from __future__ import annotations

import json
import re
from typing import Iterator

from ..curvetype import ELLIPTIC, NODE, CombinatorialType, Component, CurveTypeError, Singularity
from ..monoid import MonoidElement, natural_key
from ..partitions import PartitionError, SetPartition, parse_partition, refines
from ..tropical import CurveError, Edge, Leg, TropicalCurve, Vertex


class ParseError(ValueError):
    """``kind`` is ``"syntax"`` or ``"semantic"``."""

    def __init__(self, message: str, line: int = 1, column: int = 1, kind: str = "syntax"):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column
        self.kind = kind


def _items(text: str, start: int, end: int) -> Iterator[tuple[str, int]]:
    """Whitespace-separated tokens of text[start:end] with their 0-based offsets."""
    for m in re.finditer(r"\S+", text[start:end]):
        yield m.group(0), start + m.start()


def _sections(text: str) -> list[tuple[int, int]]:
    out = []
    pos = 0
    for m in re.finditer(";", text):
        out.append((pos, m.start()))
        pos = m.end()
    out.append((pos, len(text)))
    return out


def _position(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def _fail(text: str, offset: int, message: str, kind: str = "syntax") -> ParseError:
    line, col = _position(text, offset)
    return ParseError(message, line, col, kind)


# -- curves -------------------------------------------------------------------

_VERTEX_RE = re.compile(r"(-?\d+)(?::(\d+))?")
_EDGE_RE = re.compile(r"(-?\d+)-(-?\d+):(\S+)")
_LEG_RE = re.compile(r"(\d+)@(-?\d+)")


def parse_curve(text: str) -> TropicalCurve:
    """Parse ``G e1 e2 ; V 0:1 1 ; E 0-1:e1 1-1:e2 ; L 1@1 2@0``.

    Sections may come in any order; ``G`` is optional and defaults to the
    generators used by edge lengths in natural order.
    """
    gens: list[str] | None = None
    vertices: list[Vertex] = []
    edges: list[Edge] = []
    legs: list[Leg] = []
    seen: set[str] = set()
    for start, end in _sections(text):
        toks = list(_items(text, start, end))
        if not toks:
            continue
        head, hpos = toks[0]
        if head not in ("G", "V", "E", "L"):
            raise _fail(text, hpos, f"expected section keyword G, V, E or L, found {head!r}")
        if head in seen:
            raise _fail(text, hpos, f"section {head} appears twice")
        seen.add(head)
        for tok, pos in toks[1:]:
            if head == "G":
                if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", tok):
                    raise _fail(text, pos, f"bad generator name {tok!r}")
                gens = (gens or []) + [tok]
            elif head == "V":
                m = _VERTEX_RE.fullmatch(tok)
                if not m:
                    raise _fail(text, pos, f"bad vertex {tok!r}; expected id or id:genus")
                vertices.append(Vertex(int(m.group(1)), int(m.group(2) or 0)))
            elif head == "E":
                m = _EDGE_RE.fullmatch(tok)
                if not m:
                    raise _fail(text, pos, f"bad edge {tok!r}; expected a-b:length")
                try:
                    length = MonoidElement.parse(m.group(3))
                except ValueError as err:
                    raise _fail(text, pos + m.start(3), str(err)) from None
                edges.append(Edge((int(m.group(1)), int(m.group(2))), length))
            else:
                m = _LEG_RE.fullmatch(tok)
                if not m:
                    raise _fail(text, pos, f"bad leg {tok!r}; expected marking@vertex")
                legs.append(Leg(int(m.group(1)), int(m.group(2))))
        if head == "G" and gens is None:
            gens = []
    if "V" not in seen:
        raise ParseError("a curve needs a V section", 1, 1)
    if gens is None:
        used = {g for e in edges for g in e.length.support}
        gens = sorted(used, key=natural_key)
    try:
        return TropicalCurve(tuple(gens), tuple(vertices), tuple(edges), tuple(legs))
    except CurveError as err:
        raise ParseError(str(err), 1, 1, "semantic") from None


def print_curve(curve: TropicalCurve) -> str:
    parts = ["G " + " ".join(curve.generators)] if curve.generators else ["G"]
    parts.append("V " + " ".join(f"{v.id}:{v.genus}" for v in curve.vertices))
    if curve.edges:
        parts.append("E " + " ".join(f"{e.ends[0]}-{e.ends[1]}:{e.length}" for e in curve.edges))
    if curve.legs:
        parts.append("L " + " ".join(f"{l.marking}@{l.root}" for l in curve.legs))
    return " ; ".join(parts)


# -- combinatorial types -----------------------------------------------------

_COMP_RE = re.compile(r"(-?\d+):g(\d+)\[([\d,\s]*)\]")
_SING_RE = re.compile(r"\s*(N|E(\d+))\(([^()]*)\)\s*")


def parse_type(text: str) -> CombinatorialType:
    """Parse ``0:g0[1,2] 1:g0[3] ; E2(0,1), N(0,0)``.

    Components are ``id:g<genus>[markings]``; after ``;`` come singular
    points, ``N(a,b)`` for a node and ``E<m>(c1,...,cm)`` for an elliptic
    m-fold point listing the component of each branch.  Singularity ids
    follow the listing order.
    """
    if text.count(";") > 1:
        raise _fail(text, text.index(";", text.index(";") + 1), "at most one ';' is allowed")
    head, _, tail = text.partition(";")
    components: list[Component] = []
    for m in re.finditer(r"-?\d+:g\d+\[[^\]]*\]|\S+", head):
        cm = _COMP_RE.fullmatch(m.group(0))
        if not cm:
            raise _fail(text, m.start(), f"bad component {m.group(0)!r}; expected id:g<genus>[markings]")
        marks = [s.strip() for s in cm.group(3).split(",") if s.strip()]
        components.append(Component(int(cm.group(1)), int(cm.group(2)), frozenset(int(x) for x in marks)))
    if not components:
        raise _fail(text, 0, "a type needs at least one component")
    sings: list[Singularity] = []
    incidence: list[tuple[int, int, int]] = []
    base = len(head) + 1
    if tail.strip():
        for sm in _iter_singularities(text, base, tail):
            kind, m, branches, spos = sm
            sid = len(sings)
            if kind == "N":
                if len(branches) != 2:
                    raise _fail(text, spos, "a node needs exactly two branches", "semantic")
                sings.append(Singularity(sid, NODE))
            else:
                if m != len(branches):
                    raise _fail(text, spos, f"E{m} lists {len(branches)} branches", "semantic")
                sings.append(Singularity(sid, ELLIPTIC))
            for c in branches:
                incidence.append((c, sid, 1))
    n = sum(len(c.markings) for c in components)
    try:
        return CombinatorialType(n, tuple(components), tuple(sings), tuple(incidence))
    except CurveTypeError as err:
        raise ParseError(str(err), 1, 1, "semantic") from None


def _iter_singularities(text: str, base: int, tail: str):
    pos = 0
    while pos < len(tail):
        m = _SING_RE.match(tail, pos)
        if not m:
            raise _fail(text, base + pos + (len(tail[pos:]) - len(tail[pos:].lstrip())),
                        f"bad singularity {tail[pos:].strip()!r}; expected N(a,b) or E<m>(c1,...)")
        kind = "N" if m.group(1) == "N" else "E"
        mult = int(m.group(2)) if m.group(2) else 2
        try:
            branches = [int(x) for x in m.group(3).split(",") if x.strip()]
        except ValueError:
            raise _fail(text, base + m.start(3), f"bad branch list {m.group(3)!r}") from None
        yield kind, mult, branches, base + m.start(1)
        pos = m.end()
        if pos < len(tail):
            if tail[pos] != ",":
                raise _fail(text, base + pos, "expected ',' between singular points")
            pos += 1


def print_type(t: CombinatorialType) -> str:
    comps = " ".join(
        f"{c.id}:g{c.genus}[{','.join(map(str, sorted(c.markings)))}]" for c in t.components
    )
    sings = []
    for s in t.singularities:
        listed = [c for c, m in sorted(t.branches[s.id].items()) for _ in range(m)]
        inner = ",".join(map(str, listed))
        sings.append(f"N({inner})" if s.sgenus == NODE else f"E{len(listed)}({inner})")
    return comps + (" ; " + ", ".join(sings) if sings else "")


# -- chains ------------------------------------------------------------------


def parse_chain(text: str, n: int | None = None) -> tuple[SetPartition, ...]:
    """Parse ``1234 < 12|34 < 12|3|4``; the chain must be strict and avoid the discrete partition."""
    if not text.strip():
        return ()
    out: list[SetPartition] = []
    pos = 0
    for piece in text.split("<"):
        lead = len(piece) - len(piece.lstrip())
        try:
            p = parse_partition(piece, n)
        except PartitionError as err:
            raise _fail(text, pos + lead, str(err)) from None
        if out and p.n != out[0].n:
            raise _fail(text, pos + lead, f"{p} is on {p.n} points, earlier entries on {out[0].n}", "semantic")
        if p.is_discrete:
            raise _fail(text, pos + lead, "a chain may not contain the discrete partition", "semantic")
        if out and not (out[-1] != p and refines(out[-1], p)):
            raise _fail(text, pos + lead, f"chain is not strict: {out[-1].compact()} < {p.compact()} fails", "semantic")
        out.append(p)
        pos += len(piece) + 1
    return tuple(out)


def print_chain(chain: tuple[SetPartition, ...]) -> str:
    return " < ".join(p.compact() for p in chain)


# -- file loading -------------------------------------------------------------


def load_json_or_text(text: str, from_json, from_text):
    s = text.strip()
    if s.startswith("{"):
        try:
            data = json.loads(s)
        except json.JSONDecodeError as err:
            raise ParseError(err.msg, err.lineno, err.colno) from None
        try:
            return from_json(data)
        except (KeyError, TypeError) as err:
            raise ParseError(f"missing or malformed field: {err}", 1, 1, "semantic") from None
        except (CurveError, CurveTypeError, PartitionError, ValueError) as err:
            raise ParseError(str(err), 1, 1, "semantic") from None
    return from_text(s)
