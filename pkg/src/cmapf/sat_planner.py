"""Bounded planning as propositional satisfiability.

A plan of exactly ``ell`` transitions for ``n`` agents is encoded with
per-agent position variables. Connectivity of every configuration uses
layered reachability variables: ``lvl(t, v, k)`` says node ``v`` is occupied
at time ``t`` and reaches the base through at most ``k`` occupied
communication hops. ``n`` hops always suffice because at most ``n`` distinct
nodes are occupied.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import MalformedModel, ZeroAgents
from .plan_semantics import Execution, PlanOutcome, canonicalize
from .sat_solver import CnfFormula, sat_solve
from .topo_graph import TopoGraph

ENGINE = "sat"


@dataclass(frozen=True)
class VarMap:
    """Dense numbering of the planning variables.

    Layout: all ``pos`` variables, then ``occ``, then ``lvl``, then ``vis``
    (coverage only). Counter auxiliaries are numbered after these.
    """

    agents: int
    horizon: int  # number of transitions
    node_count: int
    base: int
    coverage: bool = False

    @property
    def _steps(self) -> int:
        return self.horizon + 1

    @property
    def pos_count(self) -> int:
        return self.agents * self._steps * self.node_count

    @property
    def occ_count(self) -> int:
        return self._steps * self.node_count

    @property
    def lvl_count(self) -> int:
        return self._steps * self.node_count * (self.agents + 1)

    @property
    def vis_count(self) -> int:
        return self.occ_count if self.coverage else 0

    @property
    def var_count(self) -> int:
        return self.pos_count + self.occ_count + self.lvl_count + self.vis_count

    def pos(self, a: int, t: int, v: int) -> int:
        return 1 + (a * self._steps + t) * self.node_count + v

    def occ(self, t: int, v: int) -> int:
        return 1 + self.pos_count + t * self.node_count + v

    def lvl(self, t: int, v: int, k: int) -> int:
        return 1 + self.pos_count + self.occ_count + (t * self.node_count + v) * (self.agents + 1) + k

    def vis(self, t: int, v: int) -> int:
        if not self.coverage:
            raise KeyError("visited variables exist only in coverage encodings")
        return 1 + self.pos_count + self.occ_count + self.lvl_count + t * self.node_count + v


def _at_most(f: CnfFormula, lits: Sequence[int], k: int) -> None:
    """Sequential counter: at most ``k`` of ``lits`` are true."""
    n = len(lits)
    if k >= n:
        return
    if k == 0:
        for x in lits:
            f.add([-x])
        return
    s = [[f.new_var() for _ in range(k)] for _ in range(n - 1)]
    f.add([-lits[0], s[0][0]])
    for j in range(1, k):
        f.add([-s[0][j]])
    for i in range(1, n - 1):
        x = lits[i]
        f.add([-x, s[i][0]])
        f.add([-s[i - 1][0], s[i][0]])
        for j in range(1, k):
            f.add([-x, -s[i - 1][j - 1], s[i][j]])
            f.add([-s[i - 1][j], s[i][j]])
        f.add([-x, -s[i - 1][k - 1]])
    f.add([-lits[-1], -s[n - 2][k - 1]])


def _exactly(f: CnfFormula, lits: Sequence[int], k: int) -> None:
    _at_most(f, lits, k)
    _at_most(f, [-x for x in lits], len(lits) - k)


def _encode_core(g: TopoGraph, n: int, ell: int, coverage: bool) -> tuple[CnfFormula, VarMap]:
    """Clauses shared by both problems: positions, moves, occupancy, connectivity."""
    if n < 1:
        raise ZeroAgents("encoding needs at least one agent")
    if ell < 0:
        raise ValueError("horizon must be non-negative")
    vm = VarMap(n, ell, g.node_count, g.base, coverage)
    f = CnfFormula(vm.var_count)
    V = range(g.node_count)
    B = g.base

    for a in range(n):
        for t in range(ell + 1):
            f.add([vm.pos(a, t, v) for v in V])
            for u in V:
                for v in range(u + 1, g.node_count):
                    f.add([-vm.pos(a, t, u), -vm.pos(a, t, v)])
        f.add([vm.pos(a, 0, B)])
        for t in range(ell):
            for v in V:
                f.add([-vm.pos(a, t, v)] + [vm.pos(a, t + 1, w) for w in g.successors(v)])

    for t in range(ell + 1):
        for v in V:
            f.add([-vm.occ(t, v)] + [vm.pos(a, t, v) for a in range(n)])
            for a in range(n):
                f.add([-vm.pos(a, t, v), vm.occ(t, v)])

        for k in range(n + 1):
            f.add([vm.lvl(t, B, k)])
        for v in V:
            if v == B:
                continue
            f.add([-vm.lvl(t, v, 0)])
            for k in range(1, n + 1):
                f.add([-vm.lvl(t, v, k), vm.occ(t, v)])
                f.add([-vm.lvl(t, v, k)] + [vm.lvl(t, u, k - 1) for u in g.comm_neighbors(v)])
            for k in range(n):
                f.add([-vm.lvl(t, v, k), vm.lvl(t, v, k + 1)])
            f.add([-vm.occ(t, v), vm.lvl(t, v, n)])
    return f, vm


def _break_symmetry(f: CnfFormula, vm: VarMap, t: int) -> None:
    """Order agents by their node at time ``t``; agents are interchangeable."""
    for a in range(vm.agents - 1):
        for v in range(vm.node_count):
            for u in range(v):
                f.add([-vm.pos(a, t, v), -vm.pos(a + 1, t, u)])


def encode_breach(
    g: TopoGraph, target: Sequence[int], n: Optional[int] = None, max_moves: int = 0,
    symmetry_breaking: bool = True,
) -> tuple[CnfFormula, VarMap]:
    """Plans of exactly ``max_moves`` transitions ending in ``target`` (as a multiset)."""
    target = canonicalize(target)
    if n is not None and n != len(target):
        raise ValueError(f"target has {len(target)} agents, expected {n}")
    n = len(target)
    f, vm = _encode_core(g, n, max_moves, coverage=False)
    counts = Counter(target)
    for v in g.nodes:
        _exactly(f, [vm.pos(a, max_moves, v) for a in range(n)], counts.get(v, 0))
    if symmetry_breaking:
        _break_symmetry(f, vm, max_moves)
    return f, vm


def encode_bcover(
    g: TopoGraph, n: int, max_moves: int, symmetry_breaking: bool = True
) -> tuple[CnfFormula, VarMap]:
    """Covering plans of exactly ``max_moves`` transitions."""
    f, vm = _encode_core(g, n, max_moves, coverage=True)
    ell = max_moves
    for v in g.nodes:
        f.add([-vm.vis(0, v), vm.occ(0, v)])
        f.add([-vm.occ(0, v), vm.vis(0, v)])
        for t in range(1, ell + 1):
            f.add([-vm.vis(t, v), vm.vis(t - 1, v), vm.occ(t, v)])
            f.add([-vm.vis(t - 1, v), vm.vis(t, v)])
            f.add([-vm.occ(t, v), vm.vis(t, v)])
        f.add([vm.vis(ell, v)])
    for a in range(n):
        f.add([vm.pos(a, ell, g.base)])
    if symmetry_breaking and ell >= 1:
        _break_symmetry(f, vm, 1)
    return f, vm


def decode_plan(assignment: dict[int, bool], vm: VarMap, g: Optional[TopoGraph] = None) -> Execution:
    """Read agent positions out of a model, one ordered configuration per step."""
    steps = []
    for t in range(vm.horizon + 1):
        config = []
        for a in range(vm.agents):
            at = [v for v in range(vm.node_count) if assignment.get(vm.pos(a, t, v), False)]
            if len(at) != 1:
                raise MalformedModel(f"agent {a} at time {t} is on nodes {at}")
            config.append(at[0])
        steps.append(tuple(config))
    return Execution(tuple(steps))


def _horizons(max_moves: int, padding_safe: bool) -> range:
    # shorter plans extend to max_moves only when agents can idle at the end
    return range(max_moves, max_moves + 1) if padding_safe else range(max_moves + 1)


def plan_breach_sat(
    g: TopoGraph, target: Sequence[int], max_moves: int, symmetry_breaking: bool = True
) -> PlanOutcome:
    """Bounded reachability: some plan with at most ``max_moves`` transitions."""
    if max_moves < 0:
        raise ValueError("max_moves must be non-negative")
    target = canonicalize(target)
    padding_safe = all(g.can_move(v, v) for v in set(target))
    for ell in _horizons(max_moves, padding_safe):
        f, vm = encode_breach(g, target, len(target), ell, symmetry_breaking)
        model = sat_solve(f)
        if model is not None:
            return PlanOutcome.found(decode_plan(model, vm, g), ENGINE)
    return PlanOutcome.refuted(f"unsatisfiable for every horizon <= {max_moves}", ENGINE)


def plan_bcover_sat(g: TopoGraph, n: int, max_moves: int, symmetry_breaking: bool = True) -> PlanOutcome:
    """Bounded coverage: a covering plan with at most ``max_moves`` transitions."""
    if max_moves < 0:
        raise ValueError("max_moves must be non-negative")
    if n < 1:
        raise ZeroAgents("coverage needs at least one agent")
    for ell in _horizons(max_moves, g.can_move(g.base, g.base)):
        f, vm = encode_bcover(g, n, ell, symmetry_breaking)
        model = sat_solve(f)
        if model is not None:
            return PlanOutcome.found(decode_plan(model, vm, g), ENGINE)
    return PlanOutcome.refuted(f"unsatisfiable for every horizon <= {max_moves}", ENGINE)
