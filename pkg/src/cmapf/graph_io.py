"""Text formats: the ``cmapf`` graph format, plan files and Graphviz DOT.

Graph format, one directive per line (``#`` starts a comment)::

    cmapf 1            optional header, must come first
    nodes <N>
    base <id>
    move <u> <v>       directed movement edge
    moveu <u> <v>      both directions
    comm <u> <v>       communication edge (symmetric)
    label <id> <text>  optional display name

Plan files hold one configuration per line as comma-separated node ids.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional

from .errors import DuplicateEdgeWarning, ParseError, RangeError
from .plan_semantics import Execution
from .topo_graph import TopoGraph

FORMAT_VERSION = 1


@dataclass(frozen=True)
class GraphDocument:
    graph: TopoGraph
    labels: dict[int, str] = field(default_factory=dict)


def _strip(raw: str) -> str:
    return raw.split("#", 1)[0].strip()


def _ints(parts: list[str], count: int, lineno: int) -> list[int]:
    if len(parts) != count:
        raise ParseError(lineno, f"'{parts[0]}' takes {count - 1} argument(s)")
    try:
        return [int(p) for p in parts[1:]]
    except ValueError:
        raise ParseError(lineno, f"non-integer argument in {' '.join(parts)!r}") from None


def parse_document(text: str) -> GraphDocument:
    nodes: Optional[int] = None
    base: Optional[int] = None
    moves: set[tuple[int, int]] = set()
    comms: set[tuple[int, int]] = set()
    labels: dict[int, str] = {}
    seen_directive = False

    def check(ids, lineno):
        if nodes is None:
            raise ParseError(lineno, "'nodes' must come before node ids")
        for v in ids:
            if not 0 <= v < nodes:
                raise RangeError(lineno, f"node id {v} outside 0..{nodes - 1}")

    def add(edges, e, lineno, kind):
        if e in edges:
            warnings.warn(f"line {lineno}: duplicate {kind} edge {e}", DuplicateEdgeWarning, stacklevel=3)
        edges.add(e)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        if raw.lstrip().startswith("label"):
            line = raw.strip()  # label text may contain '#'
        else:
            line = _strip(raw)
        if not line:
            continue
        parts = line.split()
        key = parts[0]
        if key == "cmapf":
            if seen_directive:
                raise ParseError(lineno, "header must be the first directive")
            (version,) = _ints(parts, 2, lineno)
            if version != FORMAT_VERSION:
                raise ParseError(lineno, f"unsupported format version {version}")
        elif key == "nodes":
            if nodes is not None:
                raise ParseError(lineno, "'nodes' given twice")
            (nodes,) = _ints(parts, 2, lineno)
            if nodes < 1:
                raise ParseError(lineno, "a graph needs at least one node")
        elif key == "base":
            if base is not None:
                raise ParseError(lineno, "'base' given twice")
            (base,) = _ints(parts, 2, lineno)
            check([base], lineno)
        elif key in ("move", "moveu"):
            u, v = _ints(parts, 3, lineno)
            check([u, v], lineno)
            add(moves, (u, v), lineno, "movement")
            if key == "moveu" and u != v:
                add(moves, (v, u), lineno, "movement")
        elif key == "comm":
            u, v = _ints(parts, 3, lineno)
            check([u, v], lineno)
            if u != v:
                add(comms, (min(u, v), max(u, v)), lineno, "communication")
        elif key == "label":
            pieces = line.split(None, 2)
            if len(pieces) < 3:
                raise ParseError(lineno, "'label' needs an id and a text")
            try:
                v = int(pieces[1])
            except ValueError:
                raise ParseError(lineno, f"bad node id {pieces[1]!r}") from None
            check([v], lineno)
            labels[v] = pieces[2]
        else:
            raise ParseError(lineno, f"unknown directive {key!r}")
        seen_directive = True

    if nodes is None:
        raise ParseError(0, "missing 'nodes' directive")
    if base is None:
        raise ParseError(0, "missing 'base' directive")
    return GraphDocument(TopoGraph(nodes, base, moves, comms), labels)


def parse_graph(text: str) -> TopoGraph:
    return parse_document(text).graph


def serialize_graph(g: TopoGraph, labels: Optional[dict[int, str]] = None) -> str:
    """Canonical text: symmetric movement pairs as ``moveu``, everything sorted."""
    lines = [f"cmapf {FORMAT_VERSION}", f"nodes {g.node_count}", f"base {g.base}"]
    for u, v in sorted(g.move_edges):
        if u < v and g.can_move(v, u):
            lines.append(f"moveu {u} {v}")
        elif u == v or not g.can_move(v, u):
            lines.append(f"move {u} {v}")
    lines.extend(f"comm {u} {v}" for u, v in sorted(g.comm_edges))
    for v, text in sorted((labels or {}).items()):
        if "\n" in text:
            raise ValueError(f"label for node {v} contains a newline")
        lines.append(f"label {v} {text}")
    return "\n".join(lines) + "\n"


def parse_plan(text: str) -> Execution:
    steps = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        try:
            steps.append(tuple(int(tok) for tok in line.split(",")))
        except ValueError:
            raise ParseError(lineno, f"bad configuration {line!r}") from None
    if not steps:
        raise ParseError(0, "plan has no configurations")
    if len({len(s) for s in steps}) != 1:
        raise ParseError(0, "configurations have different agent counts")
    return Execution(tuple(steps))


def serialize_plan(e: Execution) -> str:
    return "".join(",".join(map(str, c)) + "\n" for c in e.steps)


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def _dot_body(g: TopoGraph, labels, prefix: str, occupancy: Optional[dict[int, int]], indent: str) -> list[str]:
    out = []
    for v in g.nodes:
        text = labels.get(v, str(v))
        attrs = []
        if occupancy is not None and occupancy.get(v):
            text += f"\n[{occupancy[v]}]"
            attrs.append("penwidth=3")
        if v == g.base:
            attrs += ["style=filled", "fillcolor=red"]
        attrs.insert(0, f"label={_quote(text)}")
        out.append(f"{indent}{prefix}{v} [{', '.join(attrs)}];")
    for u, v in sorted(g.move_edges):
        if u < v and g.can_move(v, u):
            out.append(f"{indent}{prefix}{u} -> {prefix}{v} [dir=none];")
        elif u == v or not g.can_move(v, u):
            out.append(f"{indent}{prefix}{u} -> {prefix}{v};")
    for u, v in sorted(g.comm_edges):
        out.append(f"{indent}{prefix}{u} -> {prefix}{v} [style=dashed, dir=none, constraint=false];")
    return out


def export_dot(g: TopoGraph, plan: Optional[Execution] = None, labels: Optional[dict[int, str]] = None) -> str:
    """Graphviz rendering: movement solid, communication dashed, base filled red.

    With a plan, each configuration becomes its own ``cluster`` subgraph and
    occupied nodes show their agent count in brackets.
    """
    labels = labels or {}
    lines = ["digraph cmapf {", "  node [shape=circle];"]
    if plan is None:
        lines += _dot_body(g, labels, "n", None, "  ")
    else:
        for t, config in enumerate(plan.steps):
            occ: dict[int, int] = {}
            for v in config:
                occ[v] = occ.get(v, 0) + 1
            lines.append(f"  subgraph cluster_{t} {{")
            lines.append(f'    label="step {t}";')
            lines += _dot_body(g, labels, f"s{t}_", occ, "    ")
            lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"
