"""Hardness-reduction generators and class-conforming instance generators.

The four reductions map instances of a known-hard problem to planning
instances whose answer is the same. They double as a verification corpus:
running an exact planner on both sides must give matching answers.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import (
    BaseBlocked,
    BaseSelfLoopMissing,
    Disconnected,
    DisconnectedGrid,
    NotNeighborCommunicable,
    PreconditionViolated,
)
from .plan_semantics import canonicalize
from .topo_graph import TopoGraph, classify, sight_moveable_pair

CLASSES = ("dir", "nc", "sm", "cc")


@dataclass(frozen=True)
class Problem:
    kind: str  # "cover", "breach" or "bcover"
    agents: int
    target: Optional[tuple[int, ...]] = None
    max_moves: Optional[int] = None


@dataclass(frozen=True)
class ReducedInstance:
    graph: TopoGraph
    problem: Problem
    node_labels: dict[int, str] = field(default_factory=dict)


@dataclass(frozen=True)
class Formula3Sat:
    var_count: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        clauses = tuple(tuple(c) for c in self.clauses)
        for c in clauses:
            if not 1 <= len(c) <= 3:
                raise ValueError(f"clause {c} must have 1 to 3 literals")
            if len(set(c)) != len(c):
                raise ValueError(f"clause {c} repeats a literal")
            if any(l == 0 or abs(l) > self.var_count for l in c):
                raise ValueError(f"clause {c} has a literal outside 1..{self.var_count}")
        object.__setattr__(self, "clauses", clauses)

    def satisfied_by(self, values: Sequence[bool]) -> bool:
        """``values[i]`` is the truth value of variable ``i + 1``."""
        return all(any(values[abs(l) - 1] == (l > 0) for l in c) for c in self.clauses)


@dataclass(frozen=True)
class GridGraph:
    vertices: frozenset[tuple[int, int]]
    base: tuple[int, int]

    def __post_init__(self):
        object.__setattr__(self, "vertices", frozenset(map(tuple, self.vertices)))
        if self.base not in self.vertices:
            raise ValueError(f"base {self.base} is not a grid vertex")

    @classmethod
    def rectangle(cls, width: int, height: int, base=(0, 0)) -> "GridGraph":
        return cls(frozenset((x, y) for x in range(width) for y in range(height)), base)

    def edges(self) -> list[tuple[tuple[int, int], tuple[int, int]]]:
        out = []
        for x, y in sorted(self.vertices):
            for q in ((x + 1, y), (x, y + 1)):
                if q in self.vertices:
                    out.append(((x, y), q))
        return out


class _Builder:
    """Accumulates nodes and edges with labels while a reduction is assembled."""

    def __init__(self):
        self.labels: list[str] = []
        self.moves: set[tuple[int, int]] = set()
        self.comms: set[tuple[int, int]] = set()

    def node(self, label: str) -> int:
        self.labels.append(label)
        return len(self.labels) - 1

    def move(self, u: int, v: int, mirror: bool = False) -> None:
        self.moves.add((u, v))
        if mirror and u != v:
            self.comms.add((u, v))

    def both(self, u: int, v: int) -> None:
        self.move(u, v, mirror=True)
        self.move(v, u)

    def comm(self, u: int, v: int) -> None:
        if u != v:
            self.comms.add((u, v))

    def build(self, base: int) -> tuple[TopoGraph, dict[int, str]]:
        g = TopoGraph(len(self.labels), base, self.moves, self.comms)
        return g, dict(enumerate(self.labels))


def _copy_into(b: _Builder, g: TopoGraph) -> None:
    for v in g.nodes:
        b.node(f"G{v}")
    b.moves.update(g.move_edges)
    b.comms.update(g.comm_edges)


def _single_agent_lift(g: TopoGraph, target: tuple[int, ...]) -> tuple[TopoGraph, tuple[int, ...]]:
    """Rewrite a one-agent reachability instance as an equivalent two-agent one.

    A lone agent can only stand on the base or its communication neighbours,
    so every other node is cut off. In what remains any configuration is
    connected, and a second agent idling on the base cannot help or hurt.
    """
    keep = set(g.comm_neighbors(g.base)) | {g.base}
    moves = [(u, v) for u, v in g.move_edges if u in keep and v in keep]
    comms = [(u, v) for u, v in g.comm_edges if u in keep and v in keep]
    return g.replace(move_edges=moves, comm_edges=comms), canonicalize(target + (g.base,))


def _reach_prelude(g, target, lift_single_agent):
    if not g.can_move(g.base, g.base):
        raise BaseSelfLoopMissing("the base needs a self-loop")
    target = canonicalize(target)
    if lift_single_agent and len(target) == 1:
        g, target = _single_agent_lift(g, target)
    return g, target


def reduce_reach_to_cover_dir(
    g: TopoGraph, target: Sequence[int], lift_single_agent: bool = True
) -> ReducedInstance:
    """Reachability on directed graphs to coverage on directed graphs.

    Agents at ``target`` step onto a row ``s_1..s_k`` that is only connected
    while fully occupied, then onto ``v_1..v_k`` where ``v_k`` talks to every
    node. The ``v_1`` agent then sweeps the copy of ``g`` and everyone
    returns home. With one agent the construction breaks down (the hub and
    the sweeper would be the same agent), so single-agent instances are
    lifted to two agents first unless ``lift_single_agent`` is False.
    """
    g, target = _reach_prelude(g, target, lift_single_agent)
    k = len(target)
    b = _Builder()
    _copy_into(b, g)
    B = g.base
    s = [b.node(f"s_{i + 1}") for i in range(k)]
    v = [b.node(f"v_{i + 1}") for i in range(k)]

    for i, c in enumerate(target):
        b.move(c, s[i])
        b.move(s[i], v[i])
        b.move(v[i], B)
    for u in g.nodes:
        b.move(v[0], u)
        b.move(u, v[0])
    b.move(v[-1], v[-1])

    b.comm(s[0], B)
    for i in range(k - 1):
        b.comm(s[i], s[i + 1])
        b.comm(v[i], v[i + 1])
    for u in range(len(b.labels)):
        b.comm(v[-1], u)

    graph, labels = b.build(B)
    return ReducedInstance(graph, Problem("cover", k), labels)


def reduce_reach_to_cover_nc(
    g: TopoGraph, target: Sequence[int], lift_single_agent: bool = True
) -> ReducedInstance:
    """Reachability to coverage, staying inside neighbor-communicable graphs.

    Each target node starts a column of ``2k+2`` fresh nodes ending at
    ``v_i``. Rows are communication chains; rows of the lower block reach the
    base through column 1 and rows of the upper block through column k, so
    climbing past the middle needs all ``k`` agents side by side. ``v_k``
    talks to every node. A ``(k+1)``-node path leads from ``v_1`` down into
    the copy of ``g`` and another leads back up; both are too long for a
    line of agents to hold without ``v_k``.
    """
    if not classify(g).neighbor_communicable:
        raise NotNeighborCommunicable("input graph must be neighbor-communicable")
    g, target = _reach_prelude(g, target, lift_single_agent)
    k = len(target)
    rows = 2 * k + 2
    b = _Builder()
    _copy_into(b, g)
    B = g.base

    col = []
    for i in range(k):
        col.append([
            b.node(f"s_{i + 1}" if r == k else f"p_{i + 1}_{r + 1}") for r in range(rows)
        ])
    v = [b.node(f"v_{i + 1}") for i in range(k)]
    down = [b.node(f"d_{j + 1}") for j in range(k + 1)]
    up = [b.node(f"u_{j + 1}") for j in range(k + 1)]

    for i, c in enumerate(target):
        b.move(c, col[i][0], mirror=True)
        for r in range(rows - 1):
            b.move(col[i][r], col[i][r + 1], mirror=True)
        b.move(col[i][-1], v[i], mirror=True)
    for r in range(rows):
        for i in range(k - 1):
            b.comm(col[i][r], col[i + 1][r])
        anchor = col[0][r] if r <= k else col[-1][r]
        b.comm(anchor, B)

    b.move(v[-1], v[-1])
    b.move(v[-1], B, mirror=True)
    for i in range(k - 1):
        b.move(v[i], v[-1], mirror=True)

    chain = [v[0]] + down
    for x, y in zip(chain, chain[1:]):
        b.move(x, y, mirror=True)
    chain = up + [v[0]]
    for x, y in zip(chain, chain[1:]):
        b.move(x, y, mirror=True)
    for u in g.nodes:
        b.move(down[-1], u, mirror=True)
        b.move(u, up[0], mirror=True)

    for u in range(len(b.labels)):
        b.comm(v[-1], u)

    graph, labels = b.build(B)
    return ReducedInstance(graph, Problem("cover", k), labels)


def reduce_3sat_to_breach_sm(phi: Formula3Sat) -> ReducedInstance:
    """3-SAT to bounded reachability with ``n + m`` agents and 3 moves.

    Variable gadgets: ``B - n_x - x - g_x`` and ``B - n_~x - ~x - g_x``.
    Clause gadgets: ``B - n_c - c - g_c`` with ``c`` talking to its literals.
    Goal nodes are chained and tied to the base by a 3-node clique path.
    """
    if not phi.clauses:
        raise ValueError("formula needs at least one clause")
    b = _Builder()
    B = b.node("B")
    lit_node: dict[int, int] = {}
    goal_x = []
    for x in range(1, phi.var_count + 1):
        g_x = None
        for lit, name in ((x, f"x{x}"), (-x, f"~x{x}")):
            stage = b.node(f"n_{name}")
            node = b.node(name)
            lit_node[lit] = node
            b.both(B, stage)
            b.both(stage, node)
            b.comm(node, B)
        g_x = b.node(f"g_x{x}")
        b.both(lit_node[x], g_x)
        b.both(lit_node[-x], g_x)
        goal_x.append(g_x)
    goal_c = []
    for j, clause in enumerate(phi.clauses, start=1):
        stage = b.node(f"n_c{j}")
        node = b.node(f"c{j}")
        g_c = b.node(f"g_c{j}")
        b.both(B, stage)
        b.both(stage, node)
        b.both(node, g_c)
        for lit in clause:
            b.comm(node, lit_node[lit])
        goal_c.append(g_c)
    goals = goal_x + goal_c
    for x, y in zip(goals, goals[1:]):
        b.both(x, y)
    p1, p2, p3 = b.node("p1"), b.node("p2"), b.node("p3")
    for x, y in ((goal_x[0], p3), (p3, p2), (p2, p1), (p1, B)):
        b.both(x, y)
    clique = [goal_x[0], p3, p2, p1, B]
    for i, x in enumerate(clique):
        for y in clique[i + 1:]:
            b.comm(x, y)
    for u in range(len(b.labels)):
        b.move(u, u)

    graph, labels = b.build(B)
    problem = Problem("breach", len(goals), canonicalize(goals), 3)
    return ReducedInstance(graph, problem, labels)


def _grid_connected(cells: set[tuple[int, int]], start) -> bool:
    seen = {start}
    queue = deque([start])
    while queue:
        x, y = queue.popleft()
        for q in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            if q in cells and q not in seen:
                seen.add(q)
                queue.append(q)
    return len(seen) == len(cells)


def reduce_ghc_to_bcover_cc(grid: GridGraph) -> ReducedInstance:
    """Grid Hamiltonian cycle to bounded coverage with one agent and ``|V|`` moves.

    Self-loops are added so the output is complete-communication; they never
    help because a closed walk covering ``|V|`` nodes in ``|V|`` moves has no
    room to wait.
    """
    if not _grid_connected(set(grid.vertices), grid.base):
        raise DisconnectedGrid("grid graph is not connected")
    cells = sorted(grid.vertices, key=lambda p: (p[1], p[0]))
    index = {p: i for i, p in enumerate(cells)}
    moves = [(index[p], index[q]) for p, q in grid.edges()]
    moves += [(v, u) for u, v in moves] + [(i, i) for i in range(len(cells))]
    n = len(cells)
    comms = [(u, v) for u in range(n) for v in range(u + 1, n)]
    graph = TopoGraph(n, index[grid.base], moves, comms)
    labels = {i: f"({x},{y})" for i, (x, y) in enumerate(cells)}
    return ReducedInstance(graph, Problem("bcover", 1, None, n), labels)


def sm_closure(g: TopoGraph) -> TopoGraph:
    """Drop communication edges until the graph is sight-moveable.

    Edges mirrored from movement edges always pass and are kept. Removing an
    edge only shrinks sight neighbourhoods, so the passes converge to the
    largest sight-moveable subset of the communication edges.
    """
    report = classify(g)
    if not (report.undirected and report.reflexive and report.neighbor_communicable):
        raise PreconditionViolated("sm_closure needs an undirected, reflexive, neighbor-communicable graph")
    while True:
        failing = [
            (v, w)
            for v, w in sorted(g.comm_edges)
            if not g.can_move(v, w)
            and not (sight_moveable_pair(g, v, w) and sight_moveable_pair(g, w, v))
        ]
        if not failing:
            return g
        g = g.replace(comm_edges=g.comm_edges - set(failing))


def _coerce(g: TopoGraph, target_class: str) -> TopoGraph:
    if target_class == "dir":
        return g
    if target_class == "cc":
        n = g.node_count
        return g.replace(comm_edges=[(u, v) for u in range(n) for v in range(u + 1, n)])
    g = g.replace(comm_edges=set(g.comm_edges) | {(u, v) for u, v in g.move_edges if u != v})
    if target_class == "nc":
        return g
    if target_class == "sm":
        return sm_closure(g)
    raise ValueError(f"unknown graph class {target_class!r}; expected one of {CLASSES}")


def _line_cells(p: tuple[int, int], q: tuple[int, int]) -> list[tuple[int, int]]:
    """Cells on the Bresenham segment from ``p`` to ``q`` (inclusive)."""
    (x0, y0), (x1, y1) = p, q
    dx, dy = abs(x1 - x0), -abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx + dy
    out = []
    while True:
        out.append((x0, y0))
        if (x0, y0) == (x1, y1):
            return out
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x0 += sx
        if e2 <= dx:
            err += dx
            y0 += sy


def gen_grid_instance(
    width: int,
    height: int,
    obstacles: Iterable[tuple[int, int]] = (),
    comm_radius: float = 1.0,
    target_class: str = "nc",
    base: tuple[int, int] = (0, 0),
) -> TopoGraph:
    """Grid world: free cells are nodes, 4-neighbour moves, line-of-sight radio.

    Node ids follow row-major order over the free cells.
    """
    if target_class not in CLASSES:
        raise ValueError(f"unknown graph class {target_class!r}; expected one of {CLASSES}")
    blocked = set(map(tuple, obstacles))
    free = [(x, y) for y in range(height) for x in range(width) if (x, y) not in blocked]
    if tuple(base) in blocked or not (0 <= base[0] < width and 0 <= base[1] < height):
        raise BaseBlocked(f"base cell {base} is blocked or outside the grid")
    free_set = set(free)
    if not _grid_connected(free_set, tuple(base)):
        raise Disconnected("free cells are not 4-connected")
    index = {p: i for i, p in enumerate(free)}

    moves = [(i, i) for i in range(len(free))]
    for (x, y), i in index.items():
        for q in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            if q in index:
                moves.append((i, index[q]))
    comms = []
    for i, p in enumerate(free):
        for j in range(i + 1, len(free)):
            q = free[j]
            if math.dist(p, q) <= comm_radius and not blocked.intersection(_line_cells(p, q)):
                comms.append((i, j))
    return _coerce(TopoGraph(len(free), index[tuple(base)], moves, comms), target_class)


def _base_component(g: TopoGraph) -> TopoGraph:
    """Keep the weakly movement-connected component of the base, ids compacted."""
    seen = {g.base}
    queue = deque([g.base])
    while queue:
        u = queue.popleft()
        for x in g.successors(u) + g.predecessors(u):
            if x not in seen:
                seen.add(x)
                queue.append(x)
    keep = sorted(seen)
    index = {v: i for i, v in enumerate(keep)}
    return TopoGraph(
        len(keep),
        index[g.base],
        [(index[u], index[v]) for u, v in g.move_edges if u in index and v in index],
        [(index[u], index[v]) for u, v in g.comm_edges if u in index and v in index],
    )


def gen_random(
    node_count: int, move_prob: float, comm_prob: float, target_class: str = "nc", seed: int = 0
) -> TopoGraph:
    """Seeded random topological graph of the requested class, base at node 0."""
    if not (0 <= move_prob <= 1 and 0 <= comm_prob <= 1):
        raise ValueError("probabilities must lie in [0, 1]")
    if target_class not in CLASSES:
        raise ValueError(f"unknown graph class {target_class!r}; expected one of {CLASSES}")
    rng = random.Random(seed)
    n = node_count
    moves = []
    if target_class in ("dir", "nc"):
        for u in range(n):
            for v in range(n):
                if rng.random() < move_prob:
                    moves.append((u, v))
    else:
        moves = [(v, v) for v in range(n)]
        for u in range(n):
            for v in range(u + 1, n):
                if rng.random() < move_prob:
                    moves += [(u, v), (v, u)]
    comms = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < comm_prob]
    g = _base_component(TopoGraph(n, 0, moves, comms))
    return _coerce(g, target_class)
