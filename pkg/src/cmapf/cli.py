"""Command-line front end.

Exit codes: 0 feasible/valid, 1 infeasible/invalid, 2 search budget
exhausted, 64 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import exact_planner, poly_planners, sat_planner
from .errors import BudgetExhausted, CmapfError, ParseError
from .graph_io import export_dot, parse_document, parse_plan, serialize_graph, serialize_plan
from .plan_semantics import PlanOutcome, validate_execution
from .reductions import (
    CLASSES,
    Formula3Sat,
    GridGraph,
    ReducedInstance,
    gen_grid_instance,
    gen_random,
    reduce_3sat_to_breach_sm,
    reduce_ghc_to_bcover_cc,
    reduce_reach_to_cover_dir,
    reduce_reach_to_cover_nc,
)
from .sat_solver import parse_dimacs, to_dimacs
from .topo_graph import TopoGraph, classify

EXIT_OK = 0
EXIT_NO = 1
EXIT_BUDGET = 2
EXIT_USAGE = 64

ENGINES = {
    "reach": ("poly", "exact"),
    "cover": ("poly", "exact"),
    "breach": ("poly", "exact", "sat"),
    "bcover": ("exact", "sat"),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    elif text:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_graph(path: str) -> TopoGraph:
    return parse_document(_read(path)).graph


def _node_list(text: Optional[str]) -> Optional[tuple[int, ...]]:
    if text is None:
        return None
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise UsageError(f"bad node list {text!r}") from None


def _check_ids(g: TopoGraph, ids) -> None:
    for v in ids:
        if not 0 <= v < g.node_count:
            raise UsageError(f"node {v} outside 0..{g.node_count - 1}")


# classify


def _cmd_classify(args) -> int:
    report = classify(_load_graph(args.file))
    d = report.as_dict()
    lines = [f"{key}: {'yes' if d[key] else 'no'}" for key in ("undirected", "reflexive", "nc", "sm", "cc")]
    for prop, items in sorted(d["witnesses"].items()):
        if items:
            lines.append(f"witness {prop}: " + " ".join(map(str, items[:10])))
    _emit(args, d, "\n".join(lines))
    return EXIT_OK


# plan


def _pick_engine(problem: str, g: TopoGraph, requested: str) -> str:
    if requested != "auto":
        if requested not in ENGINES[problem]:
            raise UsageError(f"engine {requested!r} cannot solve {problem}; use one of {ENGINES[problem]}")
        return requested
    report = classify(g)
    if problem in ("reach", "cover"):
        return "poly" if report.sight_moveable else "exact"
    if problem == "breach":
        return "poly" if report.complete_communication else "sat"
    return "sat"


def _solve(problem: str, engine: str, g: TopoGraph, args) -> PlanOutcome:
    budget = exact_planner.SearchBudget(max_states=args.max_states)
    target, n, ell = args.target_nodes, args.agents, args.max_moves
    if engine == "poly":
        if problem == "reach":
            return poly_planners.plan_reach_sm(g, target)
        if problem == "cover":
            return poly_planners.plan_cover_sm(g, n)
        return poly_planners.plan_breach_cc(g, target, ell)
    if engine == "exact":
        if problem == "reach":
            return exact_planner.search_reach(g, target, budget=budget)
        if problem == "cover":
            return exact_planner.search_cover(g, n, budget=budget)
        if problem == "breach":
            return exact_planner.search_breach(g, target, max_moves=ell, budget=budget)
        return exact_planner.search_bcover(g, n, ell, budget=budget)
    if problem == "breach":
        return sat_planner.plan_breach_sat(g, target, ell)
    return sat_planner.plan_bcover_sat(g, n, ell)


def _cmd_plan(args) -> int:
    g = _load_graph(args.file)
    problem = args.problem
    args.target_nodes = _node_list(args.target)
    if problem in ("reach", "breach"):
        if not args.target_nodes:
            raise UsageError(f"{problem} needs --target")
        _check_ids(g, args.target_nodes)
        if args.agents is not None and args.agents != len(args.target_nodes):
            raise UsageError(f"--agents {args.agents} does not match a target of {len(args.target_nodes)} nodes")
    elif args.agents is None or args.agents < 1:
        raise UsageError(f"{problem} needs --agents N with N >= 1")
    if problem in ("breach", "bcover"):
        if args.max_moves is None or args.max_moves < 0:
            raise UsageError(f"{problem} needs --max-moves L with L >= 0")

    engine = _pick_engine(problem, g, args.engine)
    payload = {"problem": problem, "engine": engine}
    try:
        outcome = _solve(problem, engine, g, args)
    except BudgetExhausted as exc:
        payload.update(status="unknown", states_explored=exc.states_explored)
        _emit(args, payload, f"# unknown: search budget exhausted after {exc.states_explored} states")
        return EXIT_BUDGET

    payload.update(
        status="feasible" if outcome.feasible else "infeasible",
        states_explored=outcome.states_explored,
    )
    if outcome.feasible:
        plan = outcome.execution
        payload.update(plan=[list(c) for c in plan.steps], moves=plan.moves)
        if args.output:
            Path(args.output).write_text(serialize_plan(plan))
        text = f"# feasible ({engine}, {plan.moves} moves)\n" + serialize_plan(plan)
        _emit(args, payload, text)
        return EXIT_OK
    payload["witness"] = outcome.witness
    _emit(args, payload, f"# infeasible ({engine}): {outcome.witness}")
    return EXIT_NO


# validate


def _cmd_validate(args) -> int:
    g = _load_graph(args.graph)
    plan = parse_plan(_read(args.plan))
    try:
        report = validate_execution(g, plan, require_covering=args.covering)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    failures = [{"step": f.step, "kind": f.kind, "detail": f.detail} for f in report.failures]
    payload = {"valid": report.ok, "failures": failures, "moves": plan.moves}
    if report.ok:
        text = f"valid ({plan.moves} moves)"
    else:
        text = "\n".join(
            f"{'end' if f['step'] is None else 'step ' + str(f['step'])}: {f['kind']}: {f['detail']}" for f in failures
        )
        text = "invalid\n" + text
    _emit(args, payload, text)
    return EXIT_OK if report.ok else EXIT_NO


# reduce


def parse_grid_text(text: str) -> GridGraph:
    """``.`` free cell, ``B`` base cell, anything else absent; row ``y`` is line ``y``."""
    cells = set()
    base = None
    rows = [r for r in text.splitlines() if r.strip() and not r.lstrip().startswith(";")]
    for y, row in enumerate(rows):
        for x, ch in enumerate(row.rstrip()):
            if ch in ".B":
                cells.add((x, y))
            if ch == "B":
                if base is not None:
                    raise ParseError(y + 1, "more than one base cell")
                base = (x, y)
    if not cells:
        raise ParseError(0, "grid has no cells")
    if base is None:
        base = min(cells, key=lambda p: (p[1], p[0]))
    return GridGraph(frozenset(cells), base)


def _formula_from_dimacs(text: str) -> Formula3Sat:
    f = parse_dimacs(text)
    try:
        return Formula3Sat(f.var_count, tuple(f.clauses))
    except ValueError as exc:
        raise UsageError(f"not a 3-SAT formula: {exc}") from None


def _problem_dict(r: ReducedInstance) -> dict:
    p = r.problem
    d = {"kind": p.kind, "agents": p.agents}
    if p.target is not None:
        d["target"] = list(p.target)
    if p.max_moves is not None:
        d["max_moves"] = p.max_moves
    return d


def _cmd_reduce(args) -> int:
    kind = args.kind
    if kind == "sat3":
        inst = reduce_3sat_to_breach_sm(_formula_from_dimacs(_read(args.input)))
    elif kind == "ghc":
        inst = reduce_ghc_to_bcover_cc(parse_grid_text(_read(args.input)))
    else:
        g = _load_graph(args.input)
        target = _node_list(args.target)
        if not target:
            raise UsageError(f"{kind} needs --target")
        _check_ids(g, target)
        fn = reduce_reach_to_cover_dir if kind == "r2c-dir" else reduce_reach_to_cover_nc
        inst = fn(g, target)
    problem = _problem_dict(inst)
    graph_text = serialize_graph(inst.graph, inst.node_labels)
    header = "# problem: " + " ".join(
        f"{k}={','.join(map(str, v)) if isinstance(v, list) else v}" for k, v in sorted(problem.items())
    )
    if args.output:
        Path(args.output).write_text(graph_text)
    payload = {"problem": problem, "graph": graph_text, "labels": {str(k): v for k, v in inst.node_labels.items()}}
    _emit(args, payload, header + "\n" + graph_text)
    return EXIT_OK


# gen


def _cell(text: str) -> tuple[int, int]:
    try:
        x, y = text.split(":")
        return int(x), int(y)
    except ValueError:
        raise UsageError(f"bad cell {text!r}; expected x:y") from None


def _cmd_gen(args) -> int:
    if args.kind == "grid":
        obstacles = [_cell(c) for c in args.obstacles.split(",") if c] if args.obstacles else []
        radius = math.inf if args.radius in ("inf", "infinity") else float(args.radius)
        g = gen_grid_instance(args.width, args.height, obstacles, radius, args.graph_class, _cell(args.base))
    else:
        if args.nodes is None or args.nodes < 1:
            raise UsageError("gen random needs --nodes N with N >= 1")
        g = gen_random(args.nodes, args.move_prob, args.comm_prob, args.graph_class, args.seed)
    text = serialize_graph(g)
    if args.output:
        Path(args.output).write_text(text)
    _emit(args, {"graph": text, "node_count": g.node_count}, text)
    return EXIT_OK


# export


def _cmd_export(args) -> int:
    doc = parse_document(_read(args.file))
    g = doc.graph
    if args.format == "dot":
        plan = parse_plan(_read(args.plan)) if args.plan else None
        if plan is not None:
            for c in plan.steps:
                _check_ids(g, c)
        text = export_dot(g, plan, doc.labels)
        _emit(args, {"dot": text}, text)
        return EXIT_OK
    if args.problem is None or args.max_moves is None or args.max_moves < 0:
        raise UsageError("export dimacs needs --problem breach|bcover and --max-moves L")
    if args.problem == "breach":
        target = _node_list(args.target)
        if not target:
            raise UsageError("breach needs --target")
        _check_ids(g, target)
        f, vm = sat_planner.encode_breach(g, target, len(target), args.max_moves)
    else:
        if args.agents is None or args.agents < 1:
            raise UsageError("bcover needs --agents N with N >= 1")
        f, vm = sat_planner.encode_bcover(g, args.agents, args.max_moves)
    text = to_dimacs(f)
    _emit(args, {"dimacs": text, "variables": f.var_count, "clauses": len(f.clauses)}, text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = _Parser(prog="cmapf", description="Connected multi-agent planning on topological graphs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("classify", parents=[common], help="report graph class membership")
    c.add_argument("file")
    c.set_defaults(func=_cmd_classify)

    c = sub.add_parser("plan", parents=[common], help="decide a planning problem and print a plan")
    c.add_argument("problem", choices=sorted(ENGINES))
    c.add_argument("file")
    c.add_argument("--agents", type=int)
    c.add_argument("--target", help="comma-separated target nodes")
    c.add_argument("--max-moves", type=int, help="bound on the number of transitions")
    c.add_argument("--engine", choices=("auto", "poly", "exact", "sat"), default="auto")
    c.add_argument("--max-states", type=int, default=exact_planner.DEFAULT_BUDGET.max_states)
    c.add_argument("-o", "--output", help="also write the plan to this file")
    c.set_defaults(func=_cmd_plan)

    c = sub.add_parser("validate", parents=[common], help="check a plan file against a graph")
    c.add_argument("graph")
    c.add_argument("plan")
    c.add_argument("--covering", action="store_true", help="also require a covering execution")
    c.set_defaults(func=_cmd_validate)

    c = sub.add_parser("reduce", parents=[common], help="build a reduction instance")
    c.add_argument("kind", choices=("sat3", "ghc", "r2c-dir", "r2c-nc"))
    c.add_argument("input", help="DIMACS file (sat3), grid text (ghc) or graph file")
    c.add_argument("--target", help="comma-separated target nodes (r2c-*)")
    c.add_argument("-o", "--output", help="also write the graph to this file")
    c.set_defaults(func=_cmd_reduce)

    c = sub.add_parser("gen", parents=[common], help="generate a graph")
    c.add_argument("kind", choices=("grid", "random"))
    c.add_argument("--class", dest="graph_class", choices=CLASSES, default="nc")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--width", type=int, default=3)
    c.add_argument("--height", type=int, default=3)
    c.add_argument("--obstacles", help="comma-separated x:y cells")
    c.add_argument("--radius", default="1.5", help="communication radius or 'inf'")
    c.add_argument("--base", default="0:0", help="base cell x:y")
    c.add_argument("--nodes", type=int)
    c.add_argument("--move-prob", type=float, default=0.4)
    c.add_argument("--comm-prob", type=float, default=0.3)
    c.add_argument("-o", "--output", help="also write the graph to this file")
    c.set_defaults(func=_cmd_gen)

    c = sub.add_parser("export", parents=[common], help="export DOT or a DIMACS encoding")
    c.add_argument("format", choices=("dot", "dimacs"))
    c.add_argument("file")
    c.add_argument("--plan", help="plan file to draw step by step (dot)")
    c.add_argument("--problem", choices=("breach", "bcover"), help="encoded problem (dimacs)")
    c.add_argument("--target")
    c.add_argument("--agents", type=int)
    c.add_argument("--max-moves", type=int)
    c.set_defaults(func=_cmd_export)
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, CmapfError, ValueError) as exc:
        if isinstance(exc, ParseError):
            msg = f"parse error at line {exc.line}: {exc.reason}"
        else:
            msg = str(exc)
        if getattr(args, "json", False):
            print(json.dumps({"status": "error", "error": type(exc).__name__, "message": msg}, sort_keys=True))
        print(f"cmapf: {msg}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
