from __future__ import annotations

import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmapf.errors import (
    BaseBlocked,
    BaseSelfLoopMissing,
    Disconnected,
    DisconnectedGrid,
    NotNeighborCommunicable,
    PreconditionViolated,
)
from cmapf.exact_planner import search_bcover, search_breach, search_cover, search_reach
from cmapf.plan_semantics import validate_execution
from cmapf.reductions import (
    Formula3Sat,
    GridGraph,
    gen_grid_instance,
    gen_random,
    reduce_3sat_to_breach_sm,
    reduce_ghc_to_bcover_cc,
    reduce_reach_to_cover_dir,
    reduce_reach_to_cover_nc,
    sm_closure,
)
from cmapf.sat_planner import plan_breach_sat
from cmapf.topo_graph import TopoGraph, classify
from support import has_hamiltonian_cycle, random_graph, truth_table_sat

P3_DIRECTED = TopoGraph(3, 0, [(0, 1), (1, 2), (0, 0), (1, 1), (2, 2)], [(0, 1), (1, 2)])


def _check_labels(inst):
    labels = inst.node_labels
    assert sorted(labels) == list(inst.graph.nodes)
    assert len(set(labels.values())) == len(labels)


# directed reachability to coverage


def test_dir_p3_single_target():
    inst = reduce_reach_to_cover_dir(P3_DIRECTED, (1,))
    _check_labels(inst)
    assert inst.problem.kind == "cover"
    assert search_reach(P3_DIRECTED, (1,)).feasible
    assert search_cover(inst.graph, inst.problem.agents).feasible


def test_dir_verbatim_single_agent_construction():
    inst = reduce_reach_to_cover_dir(P3_DIRECTED, (1,), lift_single_agent=False)
    assert inst.graph.node_count == 5 and inst.problem.agents == 1
    labels = {v: k for k, v in inst.node_labels.items()}
    g = inst.graph
    assert g.communicates(labels["s_1"], 0) and g.can_move(labels["v_1"], 0)
    assert all(g.communicates(labels["v_1"], u) for u in g.nodes)
    # one agent cannot sweep the copy: node 2 never sees the base alone
    assert not search_cover(g, 1).feasible


def test_dir_unreachable_target():
    g = TopoGraph(3, 0, [(0, 1), (0, 0), (1, 1), (2, 2)], [(0, 1), (1, 2)])
    inst = reduce_reach_to_cover_dir(g, (2,))
    assert not search_reach(g, (2,)).feasible
    assert not search_cover(inst.graph, inst.problem.agents).feasible


def test_dir_two_agents_layout():
    inst = reduce_reach_to_cover_dir(P3_DIRECTED, (1, 2))
    g, names = inst.graph, {v: k for k, v in inst.node_labels.items()}
    s1, s2, v1, v2 = names["s_1"], names["s_2"], names["v_1"], names["v_2"]
    assert g.node_count == 7 and inst.problem.agents == 2
    assert g.can_move(1, s1) and g.can_move(2, s2) and g.can_move(s1, v1)
    assert g.communicates(s1, s2) and g.communicates(v1, v2) and g.communicates(s1, 0)
    assert g.can_move(v2, v2) and not g.can_move(v1, v1)


def test_dir_needs_base_loop():
    with pytest.raises(BaseSelfLoopMissing):
        reduce_reach_to_cover_dir(TopoGraph(2, 0, [(0, 1)]), (1,))


def test_dir_equivalence_suite():
    rng = random.Random(101)
    seen = set()
    for _ in range(80):
        g = random_graph(rng, rng.randint(1, 5), move_p=0.4, comm_p=0.4)
        g = g.replace(move_edges=set(g.move_edges) | {(0, 0)})
        target = tuple(rng.randrange(g.node_count) for _ in range(rng.randint(1, 2)))
        inst = reduce_reach_to_cover_dir(g, target)
        left = search_reach(g, target).feasible
        right = search_cover(inst.graph, inst.problem.agents)
        assert left == right.feasible
        seen.add(left)
        if right.feasible:
            assert validate_execution(inst.graph, right.execution, require_covering=True).ok
    assert seen == {True, False}


# neighbor-communicable reachability to coverage


def test_nc_output_stays_nc():
    rng = random.Random(5)
    g = random_graph(rng, 4, nc=True, loops=True)
    inst = reduce_reach_to_cover_nc(g, (1, 2))
    assert classify(inst.graph).neighbor_communicable
    _check_labels(inst)


def test_nc_column_heights():
    for k, target in ((2, (1, 2)), (3, (1, 1, 2))):
        inst = reduce_reach_to_cover_nc(P3_DIRECTED.replace(comm_edges=[(0, 1), (1, 2)]), target)
        labels = set(inst.node_labels.values())
        col = [name for name in labels if name.startswith(("p_1_", "s_1"))]
        assert len(col) == 2 * k + 2
        assert {f"d_{j}" for j in range(1, k + 2)} <= labels


def test_nc_single_agent_is_lifted():
    inst = reduce_reach_to_cover_nc(P3_DIRECTED, (1,))
    assert inst.problem.agents == 2
    # two columns of 2*2+2 nodes after the lift
    assert sum(name.startswith(("p_", "s_")) for name in inst.node_labels.values()) == 12


def test_nc_rejects_non_nc():
    g = TopoGraph(2, 0, [(0, 0), (0, 1)], [])
    with pytest.raises(NotNeighborCommunicable):
        reduce_reach_to_cover_nc(g, (1,))
    with pytest.raises(BaseSelfLoopMissing):
        reduce_reach_to_cover_nc(TopoGraph(2, 0, [(0, 1)], [(0, 1)]), (1,))


def test_nc_equivalence_suite():
    rng = random.Random(102)
    seen = set()
    for _ in range(70):
        g = random_graph(rng, rng.randint(1, 4), move_p=0.4, comm_p=0.3, nc=True)
        g = g.replace(move_edges=set(g.move_edges) | {(0, 0)})
        target = tuple(rng.randrange(g.node_count) for _ in range(rng.randint(1, 2)))
        inst = reduce_reach_to_cover_nc(g, target)
        left = search_reach(g, target).feasible
        assert left == search_cover(inst.graph, inst.problem.agents).feasible
        seen.add(left)
    assert seen == {True, False}


# 3-SAT to bounded reachability


def test_sat3_two_clause_formula():
    inst = reduce_3sat_to_breach_sm(Formula3Sat(3, ((1, -2, 3), (2, 3))))
    assert inst.graph.node_count == 25
    assert (inst.problem.kind, inst.problem.agents, inst.problem.max_moves) == ("breach", 5, 3)
    _check_labels(inst)
    names = {v: k for k, v in inst.node_labels.items()}
    assert sorted(inst.problem.target) == sorted(names[f"g_{x}"] for x in ("x1", "x2", "x3", "c1", "c2"))
    assert search_breach(inst.graph, inst.problem.target, max_moves=3).feasible


def test_sat3_contradiction():
    inst = reduce_3sat_to_breach_sm(Formula3Sat(1, ((1,), (-1,))))
    assert not search_breach(inst.graph, inst.problem.target, max_moves=3).feasible
    assert not plan_breach_sat(inst.graph, inst.problem.target, 3).feasible


def test_sat3_single_clause_uses_staging_node():
    inst = reduce_3sat_to_breach_sm(Formula3Sat(1, ((1,),)))
    names = {v: k for k, v in inst.node_labels.items()}
    out = search_breach(inst.graph, inst.problem.target, max_moves=3)
    assert out.feasible
    visited = out.execution.visited()
    assert names["n_x1"] in visited or names["n_~x1"] in visited


def test_sat3_graph_is_undirected_reflexive_nc():
    inst = reduce_3sat_to_breach_sm(Formula3Sat(3, ((1, -2, 3), (2, 3))))
    r = classify(inst.graph)
    assert r.undirected and r.reflexive and r.neighbor_communicable
    # clause-to-literal edges have no movement path inside the clause's neighbourhood
    names = {v: k for k, v in inst.node_labels.items()}
    assert (min(names["c1"], names["x1"]), max(names["c1"], names["x1"])) in r.witnesses["sight_moveable"]


def test_formula_validation():
    with pytest.raises(ValueError):
        Formula3Sat(2, ((1, 2, -1, 2),))
    with pytest.raises(ValueError):
        Formula3Sat(2, ((1, 1),))
    with pytest.raises(ValueError):
        Formula3Sat(2, ((3,),))
    with pytest.raises(ValueError):
        reduce_3sat_to_breach_sm(Formula3Sat(1, ()))


def _all_clauses(n):
    lits = [v for x in range(1, n + 1) for v in (x, -x)]
    out = []
    for size in (1, 2, 3):
        for combo in itertools.combinations(lits, size):
            if len({abs(l) for l in combo}) == size:
                out.append(combo)
    return out


def sat3_family(limit=5):
    """Every formula with n + m <= limit, up to clause order."""
    for n in range(1, limit):
        clauses = _all_clauses(n)
        for m in range(1, limit - n + 1):
            for combo in itertools.combinations_with_replacement(clauses, m):
                yield Formula3Sat(n, combo)


def test_sat3_equivalence_sampled():
    family = list(sat3_family())
    rng = random.Random(103)
    for phi in rng.sample(family, 80):
        inst = reduce_3sat_to_breach_sm(phi)
        expected = truth_table_sat(phi.var_count, phi.clauses)
        assert search_breach(inst.graph, inst.problem.target, max_moves=3).feasible == expected


# grid Hamiltonian cycle to bounded coverage


def _ghc(cells, base=None):
    cells = frozenset(cells)
    return reduce_ghc_to_bcover_cc(GridGraph(cells, base or min(cells)))


def test_ghc_examples():
    inst = _ghc(GridGraph.rectangle(2, 2).vertices)
    assert (inst.problem.kind, inst.problem.agents, inst.problem.max_moves) == ("bcover", 1, 4)
    assert classify(inst.graph).complete_communication
    assert search_bcover(inst.graph, 1, 4).feasible
    inst = _ghc(GridGraph.rectangle(3, 1).vertices)
    assert not search_bcover(inst.graph, 1, 3).feasible
    inst = _ghc(GridGraph.rectangle(3, 3).vertices)
    assert not search_bcover(inst.graph, 1, 9).feasible


def test_ghc_disconnected():
    with pytest.raises(DisconnectedGrid):
        _ghc({(0, 0), (2, 0)})
    with pytest.raises(ValueError):
        GridGraph(frozenset({(0, 0)}), (1, 1))


def connected_subgrids(width=3, height=3, min_size=3):
    cells = [(x, y) for x in range(width) for y in range(height)]
    for size in range(min_size, len(cells) + 1):
        for subset in itertools.combinations(cells, size):
            try:
                inst = _ghc(subset)
            except DisconnectedGrid:
                continue
            yield subset, inst


def test_ghc_equivalence_exhaustive():
    count = 0
    for subset, inst in connected_subgrids():
        assert search_bcover(inst.graph, 1, inst.problem.max_moves).feasible == has_hamiltonian_cycle(subset)
        count += 1
    assert count >= 50


def test_ghc_two_cells_is_degenerate():
    # a single edge gives a closed walk of two moves but no simple cycle
    inst = _ghc({(0, 0), (1, 0)})
    assert search_bcover(inst.graph, 1, 2).feasible
    assert not has_hamiltonian_cycle({(0, 0), (1, 0)})


# generators


def test_grid_generator_examples():
    assert classify(gen_grid_instance(3, 3, (), 1.5, "nc")).neighbor_communicable
    assert classify(gen_grid_instance(2, 2, (), math.inf, "cc")).complete_communication
    g = gen_grid_instance(3, 3, {(1, 1)}, 2.9, "sm")
    assert g.node_count == 8 and classify(g).sight_moveable


def test_grid_line_of_sight():
    g = gen_grid_instance(3, 1, (), 2.0, "dir")
    assert g.communicates(0, 2)
    g = gen_grid_instance(3, 2, {(1, 0)}, 2.0, "dir")
    # cells (0,0) and (2,0) are ids 0 and 1; the obstacle sits between them
    assert not g.communicates(0, 1)


def test_grid_generator_errors():
    with pytest.raises(BaseBlocked):
        gen_grid_instance(2, 2, {(0, 0)}, 1.0, "nc")
    with pytest.raises(Disconnected):
        gen_grid_instance(3, 1, {(1, 0)}, 1.0, "nc")
    with pytest.raises(ValueError):
        gen_grid_instance(2, 2, (), 1.0, "xx")


def test_sm_closure_fig1(FIG1):
    closed = sm_closure(FIG1)
    assert (2, 8) in FIG1.comm_edges and (2, 8) not in closed.comm_edges
    assert classify(closed).sight_moveable


def test_sm_closure_keeps_sm_graphs(P3, K3):
    assert sm_closure(P3) == P3 and sm_closure(K3) == K3


def test_sm_closure_prunes_spider_legs():
    legs = [(0, 1), (1, 2), (0, 3), (3, 4)]
    moves = legs + [(v, u) for u, v in legs] + [(v, v) for v in range(5)]
    g = TopoGraph(5, 0, moves, legs + [(2, 4), (1, 3)])
    closed = sm_closure(g)
    assert (2, 4) not in closed.comm_edges
    assert (1, 3) in closed.comm_edges  # path 1-0-3 stays inside comm(1) once 1~0, 1~3
    assert classify(closed).sight_moveable


def test_sm_closure_precondition(P3):
    with pytest.raises(PreconditionViolated):
        sm_closure(TopoGraph(2, 0, [(0, 1)], [(0, 1)]))


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 7), st.floats(0, 1), st.floats(0, 1), st.integers(0, 10**6))
def test_sm_closure_result_is_sm_and_idempotent(n, mp, cp, seed):
    g = gen_random(n, mp, cp, "nc", seed)
    g = g.replace(move_edges=set(g.move_edges) | {(v, u) for u, v in g.move_edges} | {(v, v) for v in g.nodes})
    g = g.replace(comm_edges=set(g.comm_edges) | {(u, v) for u, v in g.move_edges if u != v})
    closed = sm_closure(g)
    assert classify(closed).sight_moveable
    assert sm_closure(closed) == closed
    assert closed.comm_edges <= g.comm_edges


def test_random_generator_examples():
    assert gen_random(6, 0.4, 0.3, "nc", 7) == gen_random(6, 0.4, 0.3, "nc", 7)
    for seed in range(30):
        assert classify(gen_random(6, 0.4, 0.3, "sm", seed)).sight_moveable
    g = gen_random(1, 0.5, 0.5, "cc", 0)
    assert g.node_count == 1 and classify(g).complete_communication
    with pytest.raises(ValueError):
        gen_random(3, 1.5, 0.1, "nc", 0)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 8), st.sampled_from(["dir", "nc", "sm", "cc"]), st.integers(0, 10**6))
def test_random_generator_classes(n, cls, seed):
    g = gen_random(n, 0.4, 0.3, cls, seed)
    r = classify(g)
    assert g.base == 0 and g.node_count <= n
    assert {"nc": r.neighbor_communicable, "sm": r.sight_moveable, "cc": r.complete_communication}.get(cls, True)
    # every kept node is weakly movement-connected to the base
    seen, stack = {0}, [0]
    while stack:
        u = stack.pop()
        for x in g.successors(u) + g.predecessors(u):
            if x not in seen:
                seen.add(x)
                stack.append(x)
    assert seen == set(g.nodes)
