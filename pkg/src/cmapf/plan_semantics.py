"""Configurations, executions and the validator every planner is checked against.

Agents are anonymous, so a configuration is a multiset of node ids kept as a
sorted tuple. Plan length always counts transitions (configurations - 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import AgentCountMismatch, ZeroAgents
from .topo_graph import TopoGraph, comm_connected_subset

Configuration = tuple[int, ...]

DISCONNECTED = "disconnected"
ILLEGAL_MOVE = "illegal_move"
BAD_START = "bad_start"
BAD_END = "bad_end"
UNCOVERED_NODE = "uncovered_node"


def canonicalize(positions: Iterable[int]) -> Configuration:
    c = tuple(sorted(int(p) for p in positions))
    if not c:
        raise ZeroAgents("a configuration needs at least one agent")
    return c


def all_base(g: TopoGraph, n: int) -> Configuration:
    if n < 1:
        raise ZeroAgents("a configuration needs at least one agent")
    return (g.base,) * n


@dataclass(frozen=True)
class Execution:
    """A sequence of configurations of equal width.

    Steps are stored as given (ordered per agent when a planner tracks
    identities); legality is always judged up to reordering.
    """

    steps: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        steps = tuple(tuple(int(p) for p in s) for s in self.steps)
        if not steps:
            raise ValueError("an execution needs at least one configuration")
        width = len(steps[0])
        if width == 0:
            raise ZeroAgents("an execution needs at least one agent")
        if any(len(s) != width for s in steps):
            raise AgentCountMismatch("all configurations must have the same agent count")
        object.__setattr__(self, "steps", steps)

    @property
    def agents(self) -> int:
        return len(self.steps[0])

    @property
    def moves(self) -> int:
        """Plan length in transitions."""
        return len(self.steps) - 1

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def __getitem__(self, i):
        return self.steps[i]

    def visited(self) -> set[int]:
        return {v for s in self.steps for v in s}


@dataclass(frozen=True)
class Failure:
    step: Optional[int]  # None for whole-execution failures (uncovered nodes)
    kind: str
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    failures: tuple[Failure, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.ok

    def kinds_at(self, step: Optional[int]) -> set[str]:
        return {f.kind for f in self.failures if f.step == step}


def is_valid_configuration(g: TopoGraph, c: Sequence[int]) -> bool:
    """Agents plus the base form a connected communication subgraph."""
    nodes = set(c)
    nodes.add(g.base)
    return comm_connected_subset(g, nodes)


def is_legal_step_ordered(g: TopoGraph, c: Sequence[int], c2: Sequence[int]) -> bool:
    if len(c) != len(c2):
        raise AgentCountMismatch("configurations differ in agent count")
    return all(g.can_move(u, v) for u, v in zip(c, c2))


def is_legal_step_multiset(g: TopoGraph, c: Sequence[int], c2: Sequence[int]) -> bool:
    """Is there a perfect matching of ``c`` onto ``c2`` along movement edges?

    Kuhn's augmenting-path matching over agent occurrences.
    """
    if len(c) != len(c2):
        raise AgentCountMismatch("configurations differ in agent count")
    n = len(c)
    adj = [[j for j in range(n) if g.can_move(c[i], c2[j])] for i in range(n)]
    match_right = [-1] * n

    def augment(i: int, seen: list[bool]) -> bool:
        for j in adj[i]:
            if seen[j]:
                continue
            seen[j] = True
            if match_right[j] < 0 or augment(match_right[j], seen):
                match_right[j] = i
                return True
        return False

    for i in range(n):
        if not augment(i, [False] * n):
            return False
    return True


def validate_execution(
    g: TopoGraph,
    e: Execution | Sequence[Sequence[int]],
    require_covering: bool = False,
    agent_count: Optional[int] = None,
) -> ValidationReport:
    """Check an execution and report every failure found, in step order."""
    if not isinstance(e, Execution):
        e = Execution(tuple(tuple(s) for s in e))
    if agent_count is not None and e.agents != agent_count:
        raise AgentCountMismatch(f"execution has {e.agents} agents, expected {agent_count}")

    failures: list[Failure] = []
    for i, c in enumerate(e.steps):
        bad = [v for v in c if not 0 <= v < g.node_count]
        if bad:
            raise ValueError(f"step {i}: node ids {bad} out of range")
        if not is_valid_configuration(g, c):
            failures.append(Failure(i, DISCONNECTED, f"{tuple(c)} plus base is not connected"))
        if i > 0 and not is_legal_step_multiset(g, e.steps[i - 1], c):
            failures.append(
                Failure(i, ILLEGAL_MOVE, f"no movement matching from {e.steps[i - 1]} to {tuple(c)}")
            )

    if require_covering:
        b = g.base
        if any(v != b for v in e.steps[0]):
            failures.append(Failure(0, BAD_START, f"starts at {e.steps[0]}, not all-base"))
        if any(v != b for v in e.steps[-1]):
            last = len(e.steps) - 1
            failures.append(Failure(last, BAD_END, f"ends at {e.steps[-1]}, not all-base"))
        for v in sorted(set(g.nodes) - e.visited()):
            failures.append(Failure(None, UNCOVERED_NODE, f"node {v} never visited"))
    return ValidationReport(tuple(failures))


@dataclass(frozen=True)
class PlanOutcome:
    """Decision plus certificate: an execution when feasible, a witness otherwise."""

    feasible: bool
    execution: Optional[Execution] = None
    witness: object = None
    engine: str = ""
    states_explored: Optional[int] = None

    def __post_init__(self):
        if self.feasible and self.execution is None:
            raise ValueError("a feasible outcome carries an execution")
        if not self.feasible and (self.execution is not None or self.witness is None):
            raise ValueError("an infeasible outcome carries a witness and no execution")

    @classmethod
    def found(cls, steps, engine: str, **kw) -> "PlanOutcome":
        ex = steps if isinstance(steps, Execution) else Execution(tuple(steps))
        return cls(True, ex, None, engine, **kw)

    @classmethod
    def refuted(cls, witness, engine: str, **kw) -> "PlanOutcome":
        return cls(False, None, witness, engine, **kw)
