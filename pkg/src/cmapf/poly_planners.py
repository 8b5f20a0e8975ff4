"""Polynomial-time planners for sight-moveable and complete-communication graphs.

Reachability and coverage on sight-moveable graphs reduce to connectivity
questions on the communication graph; bounded reachability on
complete-communication graphs reduces to movement distances. Each planner
also synthesizes a witness execution. Synthesized plans move one agent at a
time along a communication tree, which keeps every intermediate
configuration connected; they are not makespan-optimal.
"""

from __future__ import annotations

from collections import deque
from typing import Sequence

from .errors import NotCompleteCommunication, NotSightMoveable, ZeroAgents
from .plan_semantics import PlanOutcome, all_base, canonicalize
from .topo_graph import TopoGraph, classify, comm_hop_distances, movement_path

ENGINE = "poly"


def _require_sm(g: TopoGraph) -> None:
    report = classify(g)
    if not report.sight_moveable:
        raise NotSightMoveable(f"graph is not sight-moveable: {report.witnesses['sight_moveable'][:3]}")


def _comm_tree(g: TopoGraph, within: set[int] | None = None) -> tuple[dict[int, int], list[int]]:
    """BFS tree over communication edges rooted at the base, lowest id first.

    Returns ``(parent, order)`` where ``order`` lists nodes by nondecreasing depth.
    """
    parent = {g.base: g.base}
    order = [g.base]
    queue = deque([g.base])
    while queue:
        u = queue.popleft()
        for x in g.comm_neighbors(u):
            if x in parent or (within is not None and x not in within):
                continue
            parent[x] = u
            order.append(x)
            queue.append(x)
    return parent, order


def _tree_path(parent: dict[int, int], v: int) -> list[int]:
    path = [v]
    while parent[path[-1]] != path[-1]:
        path.append(parent[path[-1]])
    return path[::-1]


def _relay_route(g: TopoGraph, hops: Sequence[int]) -> list[int]:
    """Expand a communication path into a movement route.

    Each hop ``a ⇝ b`` becomes a movement path staying within sight of ``a``.
    """
    route = [hops[0]]
    for a, b in zip(hops, hops[1:]):
        allowed = set(g.comm_neighbors(a))
        allowed.add(a)
        seg = movement_path(g, a, b, allowed)
        assert seg is not None, f"sight-moveable graph lacks a path for ({a}, {b})"
        route.extend(seg[1:])
    return route


class _Recorder:
    """Moves one agent at a time while the rest take self-loops."""

    def __init__(self, start: tuple[int, ...]):
        self.positions = list(start)
        self.steps = [tuple(start)]

    def walk(self, agent: int, route: Sequence[int]) -> None:
        assert self.positions[agent] == route[0]
        for v in route[1:]:
            self.positions[agent] = v
            self.steps.append(tuple(self.positions))


def plan_reach_sm(g: TopoGraph, target: Sequence[int]) -> PlanOutcome:
    """Reachability of ``target`` from all-base on a sight-moveable graph."""
    _require_sm(g)
    target = canonicalize(target)
    wanted = set(target) | {g.base}
    parent, order = _comm_tree(g, within=wanted)
    missing = sorted(wanted - set(parent))
    if missing:
        return PlanOutcome.refuted(missing[0], ENGINE)

    rec = _Recorder(all_base(g, len(target)))
    agents_for: dict[int, list[int]] = {}
    for agent, v in enumerate(target):
        agents_for.setdefault(v, []).append(agent)
    for v in order[1:]:
        route = _relay_route(g, _tree_path(parent, v))
        for agent in agents_for[v]:
            rec.walk(agent, route)
    return PlanOutcome.found(rec.steps, ENGINE)


def plan_cover_sm(g: TopoGraph, n: int) -> PlanOutcome:
    """Coverage with ``n`` agents on a sight-moveable graph."""
    _require_sm(g)
    if n < 1:
        raise ZeroAgents("coverage needs at least one agent")
    dist = comm_hop_distances(g)
    unreachable = [v for v in g.nodes if dist[v] is None]
    if unreachable:
        return PlanOutcome.refuted(unreachable[0], ENGINE)
    too_far = [v for v in g.nodes if dist[v] > n]
    if too_far:
        return PlanOutcome.refuted(too_far[0], ENGINE)

    parent, _ = _comm_tree(g)
    rec = _Recorder(all_base(g, n))
    visited = {g.base}
    for v in g.nodes:
        if v in visited:
            continue
        hops = _tree_path(parent, v)
        routes = [_relay_route(g, hops[: j + 1]) for j in range(1, len(hops))]
        for agent, route in enumerate(routes):
            rec.walk(agent, route)
            visited.update(route)
        for agent in reversed(range(len(routes))):
            rec.walk(agent, routes[agent][::-1])
    return PlanOutcome.found(rec.steps, ENGINE)


def plan_breach_cc(g: TopoGraph, target: Sequence[int], max_moves: int) -> PlanOutcome:
    """Bounded reachability on a complete-communication graph.

    All agents walk their shortest movement paths simultaneously; finished
    agents wait on self-loops.
    """
    if not classify(g).complete_communication:
        raise NotCompleteCommunication("graph does not have complete communication")
    target = canonicalize(target)
    paths = []
    for v in target:
        path = movement_path(g, g.base, v)
        if path is None or len(path) - 1 > max_moves:
            return PlanOutcome.refuted(v, ENGINE)
        paths.append(path)
    horizon = max(len(p) for p in paths)
    steps = [tuple(p[min(t, len(p) - 1)] for p in paths) for t in range(horizon)]
    return PlanOutcome.found(steps, ENGINE)
