"""Connected multi-agent path finding on topological graphs."""

from __future__ import annotations

from .errors import BudgetExhausted, CmapfError, ParseError
from .exact_planner import SearchBudget, search_bcover, search_breach, search_cover, search_reach
from .fixtures import fig1, k3, load_fixture, p3
from .graph_io import export_dot, parse_graph, parse_plan, serialize_graph, serialize_plan
from .plan_semantics import Execution, PlanOutcome, canonicalize, validate_execution
from .poly_planners import plan_breach_cc, plan_cover_sm, plan_reach_sm
from .reductions import (
    Formula3Sat,
    GridGraph,
    ReducedInstance,
    gen_grid_instance,
    gen_random,
    reduce_3sat_to_breach_sm,
    reduce_ghc_to_bcover_cc,
    reduce_reach_to_cover_dir,
    reduce_reach_to_cover_nc,
    sm_closure,
)
from .sat_planner import plan_bcover_sat, plan_breach_sat
from .topo_graph import GraphClassReport, TopoGraph, classify

__all__ = [
    "BudgetExhausted",
    "CmapfError",
    "Execution",
    "Formula3Sat",
    "GraphClassReport",
    "GridGraph",
    "ParseError",
    "PlanOutcome",
    "ReducedInstance",
    "SearchBudget",
    "TopoGraph",
    "canonicalize",
    "classify",
    "export_dot",
    "fig1",
    "gen_grid_instance",
    "gen_random",
    "k3",
    "load_fixture",
    "p3",
    "parse_graph",
    "parse_plan",
    "plan_bcover_sat",
    "plan_breach_cc",
    "plan_breach_sat",
    "plan_cover_sm",
    "plan_reach_sm",
    "reduce_3sat_to_breach_sm",
    "reduce_ghc_to_bcover_cc",
    "reduce_reach_to_cover_dir",
    "reduce_reach_to_cover_nc",
    "search_bcover",
    "search_breach",
    "search_cover",
    "search_reach",
    "serialize_graph",
    "serialize_plan",
    "sm_closure",
    "validate_execution",
]
