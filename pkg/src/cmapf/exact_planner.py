"""Complete breadth-first search over canonical configurations.

Works on any topological graph and decides all four problems, so it serves
as the ground-truth oracle for the other engines. State counts grow as
C(|V|+n-1, n) (times 2^|V| for coverage); callers bound the work with a
:class:`SearchBudget`.

Bounded searches prune states that provably cannot finish in the remaining
moves. The bounds ignore connectivity, so they are relaxations and never
discard a state that could lead to a solution.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import chain, combinations_with_replacement, product
from typing import Callable, Hashable, Iterable, Optional, Sequence

from .errors import AgentCountMismatch, BudgetExhausted, ZeroAgents
from .plan_semantics import Configuration, PlanOutcome, all_base, canonicalize, is_valid_configuration
from .topo_graph import TopoGraph, movement_distances

ENGINE = "exact"


@dataclass(frozen=True)
class SearchBudget:
    max_states: int = 10_000_000
    max_depth: Optional[int] = None

    def __post_init__(self):
        if self.max_states < 1:
            raise ValueError("max_states must be at least 1")


DEFAULT_BUDGET = SearchBudget()


class ConfigSpace:
    """Lazily expanded graph of valid canonical configurations for ``n`` agents."""

    def __init__(self, g: TopoGraph, n: int):
        if n < 1:
            raise ZeroAgents("search needs at least one agent")
        self.g = g
        self.n = n
        self._valid: dict[Configuration, bool] = {}
        self._succ: dict[Configuration, tuple[Configuration, ...]] = {}

    def valid(self, c: Configuration) -> bool:
        ok = self._valid.get(c)
        if ok is None:
            ok = self._valid[c] = is_valid_configuration(self.g, c)
        return ok

    def successors(self, c: Configuration) -> tuple[Configuration, ...]:
        """Valid canonical successors in lexicographic order.

        Agents sharing a node are interchangeable, so each group of ``k``
        co-located agents picks a multiset of ``k`` successor nodes.
        """
        out = self._succ.get(c)
        if out is not None:
            return out
        choices = [
            list(combinations_with_replacement(self.g.successors(u), k))
            for u, k in sorted(Counter(c).items())
        ]
        found = set()
        for combo in product(*choices):
            nxt = tuple(sorted(chain.from_iterable(combo)))
            if self.valid(nxt):
                found.add(nxt)
        out = self._succ[c] = tuple(sorted(found))
        return out


def _all_distances_to(g: TopoGraph, targets: Iterable[int]) -> dict[int, list[Optional[int]]]:
    return {t: movement_distances(g, t, reverse=True) for t in set(targets)}


def _within(d: Optional[int], r: Optional[int]) -> bool:
    return d is not None and (r is None or d <= r)


def _can_assign(positions: Sequence[int], slots: Sequence[int], dist_to, remaining: Optional[int]) -> bool:
    """Perfect matching of agents to target slots reachable in ``remaining`` moves."""
    n = len(positions)
    adj = [[j for j in range(n) if _within(dist_to[slots[j]][positions[i]], remaining)] for i in range(n)]
    match = [-1] * n

    def augment(i, seen):
        for j in adj[i]:
            if not seen[j]:
                seen[j] = True
                if match[j] < 0 or augment(match[j], seen):
                    match[j] = i
                    return True
        return False

    return all(augment(i, [False] * n) for i in range(n))


def _bfs(
    start: Hashable,
    successors: Callable[[Hashable], Iterable[Hashable]],
    is_goal: Callable[[Hashable], bool],
    budget: SearchBudget,
    max_depth: Optional[int] = None,
    dead: Optional[Callable[[Hashable, Optional[int]], bool]] = None,
) -> tuple[Optional[list[Hashable]], int]:
    """Layered BFS; returns (state path or None, states discovered).

    ``dead(state, remaining)`` marks states that cannot reach a goal.
    Raises BudgetExhausted when the state or depth budget runs out first.
    """
    parent: dict[Hashable, Hashable] = {start: None}

    def path_to(s):
        out = [s]
        while parent[out[-1]] is not None:
            out.append(parent[out[-1]])
        return out[::-1]

    if is_goal(start):
        return [start], 1
    if dead is not None and dead(start, max_depth):
        return None, 1
    frontier = [start]
    depth = 0
    depth_cap = budget.max_depth
    while frontier:
        if max_depth is not None and depth >= max_depth:
            break
        if depth_cap is not None and depth >= depth_cap:
            raise BudgetExhausted(len(parent))
        depth += 1
        remaining = None if max_depth is None else max_depth - depth
        nxt = []
        for s in frontier:
            for s2 in successors(s):
                if s2 in parent:
                    continue
                if dead is not None and dead(s2, remaining):
                    continue
                parent[s2] = s
                if len(parent) > budget.max_states:
                    raise BudgetExhausted(len(parent))
                if is_goal(s2):
                    return path_to(s2), len(parent)
                nxt.append(s2)
        frontier = nxt
    return None, len(parent)


def _reach(g, target, n, budget, max_moves) -> PlanOutcome:
    target = canonicalize(target)
    if n is not None and n != len(target):
        raise AgentCountMismatch(f"target has {len(target)} agents, expected {n}")
    space = ConfigSpace(g, len(target))
    if not space.valid(target):
        return PlanOutcome.refuted("target configuration is not connected", ENGINE, states_explored=0)
    dist_to = _all_distances_to(g, target)

    def dead(c, remaining):
        return not _can_assign(c, target, dist_to, remaining)

    path, explored = _bfs(
        all_base(g, len(target)),
        space.successors,
        lambda c: c == target,
        budget or DEFAULT_BUDGET,
        max_depth=max_moves,
        dead=dead,
    )
    if path is None:
        return PlanOutcome.refuted(f"no execution found ({explored} states explored)", ENGINE, states_explored=explored)
    return PlanOutcome.found(path, ENGINE, states_explored=explored)


def search_reach(
    g: TopoGraph, target: Sequence[int], n: Optional[int] = None, budget: Optional[SearchBudget] = None
) -> PlanOutcome:
    """Reachability: is ``target`` reachable from all agents at the base?"""
    return _reach(g, target, n, budget, None)


def search_breach(
    g: TopoGraph,
    target: Sequence[int],
    n: Optional[int] = None,
    max_moves: int = 0,
    budget: Optional[SearchBudget] = None,
) -> PlanOutcome:
    """Bounded reachability within ``max_moves`` transitions."""
    if max_moves < 0:
        raise ValueError("max_moves must be non-negative")
    return _reach(g, target, n, budget, max_moves)


def _cover(g, n, budget, max_moves) -> PlanOutcome:
    space = ConfigSpace(g, n)
    full = (1 << g.node_count) - 1
    base = g.base
    home = movement_distances(g, base, reverse=True)
    out_of = [movement_distances(g, v) for v in g.nodes]

    def successors(state):
        c, seen = state
        for c2 in space.successors(c):
            mask = seen
            for v in c2:
                mask |= 1 << v
            yield (c2, mask)

    def is_goal(state):
        c, seen = state
        return seen == full and all(v == base for v in c)

    def dead(state, remaining):
        c, seen = state
        if not all(_within(home[p], remaining) for p in c):
            return True
        for u in g.nodes:
            if seen >> u & 1:
                continue
            if home[u] is None:
                return True
            best = min((out_of[p][u] for p in c if out_of[p][u] is not None), default=None)
            if best is None or (remaining is not None and best + home[u] > remaining):
                return True
        return False

    start = (all_base(g, n), 1 << base)
    path, explored = _bfs(start, successors, is_goal, budget or DEFAULT_BUDGET, max_moves, dead)
    if path is None:
        return PlanOutcome.refuted(f"no covering execution ({explored} states explored)", ENGINE, states_explored=explored)
    return PlanOutcome.found([c for c, _ in path], ENGINE, states_explored=explored)


def search_cover(g: TopoGraph, n: int, budget: Optional[SearchBudget] = None) -> PlanOutcome:
    """Coverage: can ``n`` agents visit every node and return to the base?"""
    return _cover(g, n, budget, None)


def search_bcover(g: TopoGraph, n: int, max_moves: int, budget: Optional[SearchBudget] = None) -> PlanOutcome:
    """Coverage within ``max_moves`` transitions."""
    if max_moves < 0:
        raise ValueError("max_moves must be non-negative")
    return _cover(g, n, budget, max_moves)
