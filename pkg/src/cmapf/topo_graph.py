"""Topological graphs: movement + communication relations over a shared node set.

Nodes are dense integers ``0 .. node_count-1``. Movement edges are ordered
pairs; communication edges are unordered and stored as ``(min, max)``.
A node always communicates with itself, so self communication pairs are
never stored.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import NotACommEdge

Edge = tuple[int, int]


class TopoGraph:
    """Immutable topological graph with a distinguished base node."""

    __slots__ = (
        "node_count",
        "base",
        "move_edges",
        "comm_edges",
        "_succ",
        "_pred",
        "_comm",
    )

    def __init__(
        self,
        node_count: int,
        base: int,
        move_edges: Iterable[Edge] = (),
        comm_edges: Iterable[Edge] = (),
    ):
        if node_count < 1:
            raise ValueError("a topological graph needs at least one node")
        if not 0 <= base < node_count:
            raise ValueError(f"base {base} out of range for {node_count} nodes")
        moves = frozenset((int(u), int(v)) for u, v in move_edges)
        comms = frozenset(
            (min(int(u), int(v)), max(int(u), int(v)))
            for u, v in comm_edges
            if u != v
        )
        for u, v in moves | comms:
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise ValueError(f"edge ({u}, {v}) out of range for {node_count} nodes")

        succ: list[list[int]] = [[] for _ in range(node_count)]
        pred: list[list[int]] = [[] for _ in range(node_count)]
        for u, v in moves:
            succ[u].append(v)
            pred[v].append(u)
        comm: list[list[int]] = [[] for _ in range(node_count)]
        for u, v in comms:
            comm[u].append(v)
            comm[v].append(u)

        object.__setattr__(self, "node_count", node_count)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "move_edges", moves)
        object.__setattr__(self, "comm_edges", comms)
        object.__setattr__(self, "_succ", tuple(tuple(sorted(s)) for s in succ))
        object.__setattr__(self, "_pred", tuple(tuple(sorted(p)) for p in pred))
        object.__setattr__(self, "_comm", tuple(tuple(sorted(c)) for c in comm))

    def __setattr__(self, name, value):
        raise AttributeError("TopoGraph is immutable")

    @property
    def nodes(self) -> range:
        return range(self.node_count)

    def successors(self, v: int) -> tuple[int, ...]:
        """Movement successors of ``v`` in increasing id order."""
        return self._succ[v]

    def predecessors(self, v: int) -> tuple[int, ...]:
        return self._pred[v]

    def comm_neighbors(self, v: int) -> tuple[int, ...]:
        """Nodes other than ``v`` that communicate with ``v``."""
        return self._comm[v]

    def can_move(self, u: int, v: int) -> bool:
        return (u, v) in self.move_edges

    def communicates(self, u: int, v: int) -> bool:
        return u == v or (min(u, v), max(u, v)) in self.comm_edges

    def replace(
        self,
        *,
        node_count: Optional[int] = None,
        base: Optional[int] = None,
        move_edges: Optional[Iterable[Edge]] = None,
        comm_edges: Optional[Iterable[Edge]] = None,
    ) -> "TopoGraph":
        return TopoGraph(
            self.node_count if node_count is None else node_count,
            self.base if base is None else base,
            self.move_edges if move_edges is None else move_edges,
            self.comm_edges if comm_edges is None else comm_edges,
        )

    def __eq__(self, other):
        if not isinstance(other, TopoGraph):
            return NotImplemented
        return (
            self.node_count == other.node_count
            and self.base == other.base
            and self.move_edges == other.move_edges
            and self.comm_edges == other.comm_edges
        )

    def __hash__(self):
        return hash((self.node_count, self.base, self.move_edges, self.comm_edges))

    def __repr__(self):
        return (
            f"TopoGraph(node_count={self.node_count}, base={self.base}, "
            f"move_edges={sorted(self.move_edges)}, comm_edges={sorted(self.comm_edges)})"
        )

    def __reduce__(self):
        return (
            TopoGraph,
            (self.node_count, self.base, sorted(self.move_edges), sorted(self.comm_edges)),
        )


@dataclass(frozen=True)
class GraphClassReport:
    undirected: bool
    reflexive: bool
    neighbor_communicable: bool
    sight_moveable: bool
    complete_communication: bool
    # flag name -> violating edges/pairs (self-loop violations appear as (v, v))
    witnesses: dict[str, list[Edge]] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "undirected": self.undirected,
            "reflexive": self.reflexive,
            "nc": self.neighbor_communicable,
            "sm": self.sight_moveable,
            "cc": self.complete_communication,
            "witnesses": {k: [list(e) for e in v] for k, v in sorted(self.witnesses.items())},
        }


def sight_moveable_pair(g: TopoGraph, v: int, w: int) -> bool:
    """Can an agent walk from ``v`` to ``w`` without leaving ``v``'s sight?

    BFS over movement edges restricted to ``{v} ∪ comm(v)``.
    """
    if v == w:
        return True
    if not g.communicates(v, w):
        raise NotACommEdge(f"({v}, {w}) is not a communication edge")
    allowed = set(g.comm_neighbors(v))
    allowed.add(v)
    seen = {v}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        for x in g.successors(u):
            if x == w:
                return True
            if x in allowed and x not in seen:
                seen.add(x)
                queue.append(x)
    return False


def classify(g: TopoGraph) -> GraphClassReport:
    """Place ``g`` in the directed ⊇ NC ⊇ SM ⊇ CC hierarchy."""
    not_mirrored = sorted((u, v) for u, v in g.move_edges if (v, u) not in g.move_edges)
    no_loop = [(v, v) for v in g.nodes if not g.can_move(v, v)]
    no_comm = sorted((u, v) for u, v in g.move_edges if not g.communicates(u, v))

    undirected = not not_mirrored
    reflexive = not no_loop
    nc = not no_comm

    witnesses: dict[str, list[Edge]] = {}
    if not undirected:
        witnesses["undirected"] = not_mirrored
    if not reflexive:
        witnesses["reflexive"] = no_loop
    if not nc:
        witnesses["neighbor_communicable"] = no_comm

    # first failing orientation per communication edge
    sight_failures = []
    for v, w in sorted(g.comm_edges):
        if not sight_moveable_pair(g, v, w):
            sight_failures.append((v, w))
        elif not sight_moveable_pair(g, w, v):
            sight_failures.append((w, v))
    sm = undirected and reflexive and nc and not sight_failures
    if not sm:
        witnesses["sight_moveable"] = (
            sight_failures or not_mirrored or no_loop or no_comm
        )

    n = g.node_count
    missing = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in g.comm_edges]
    cc = sm and not missing
    if not cc:
        witnesses["complete_communication"] = missing or witnesses["sight_moveable"]

    return GraphClassReport(undirected, reflexive, nc, sm, cc, witnesses)


def comm_connected_subset(g: TopoGraph, nodes: Iterable[int]) -> bool:
    """Is the communication graph induced on ``nodes`` connected?"""
    s = set(nodes)
    if len(s) <= 1:
        return True
    start = next(iter(s))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for x in g.comm_neighbors(u):
            if x in s and x not in seen:
                seen.add(x)
                stack.append(x)
    return len(seen) == len(s)


def comm_hop_distances(g: TopoGraph, source: Optional[int] = None) -> dict[int, Optional[int]]:
    """BFS hop counts over communication edges; ``None`` marks unreachable nodes."""
    src = g.base if source is None else source
    dist: dict[int, Optional[int]] = {v: None for v in g.nodes}
    dist[src] = 0
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for x in g.comm_neighbors(u):
            if dist[x] is None:
                dist[x] = dist[u] + 1
                queue.append(x)
    return dist


def bounded_comm_reach(g: TopoGraph, s: int, t: int, n: int) -> bool:
    """Is there a communication path of at most ``n`` hops from ``s`` to ``t``?

    Expands the layered graph ``(v, j)`` for ``j = 0..n`` where each layer
    may stay put or take one communication hop.
    """
    layer = {s}
    for _ in range(n):
        if t in layer:
            return True
        nxt = set(layer)
        for u in layer:
            nxt.update(g.comm_neighbors(u))
        if nxt == layer:
            break
        layer = nxt
    return t in layer


def movement_distances(g: TopoGraph, source: Optional[int] = None, reverse: bool = False) -> list[Optional[int]]:
    """BFS distances along movement edges (towards ``source`` if ``reverse``)."""
    src = g.base if source is None else source
    step = g.predecessors if reverse else g.successors
    dist: list[Optional[int]] = [None] * g.node_count
    dist[src] = 0
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for x in step(u):
            if dist[x] is None:
                dist[x] = dist[u] + 1
                queue.append(x)
    return dist


def movement_path(
    g: TopoGraph, source: int, target: int, allowed: Optional[set[int]] = None
) -> Optional[list[int]]:
    """Shortest movement path (lowest-id tie-breaking) inside ``allowed``.

    The endpoints need not belong to ``allowed``.
    """
    if source == target:
        return [source]
    parent = {source: source}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for x in g.successors(u):
            if x in parent:
                continue
            if x != target and allowed is not None and x not in allowed:
                continue
            parent[x] = u
            if x == target:
                path = [x]
                while path[-1] != source:
                    path.append(parent[path[-1]])
                return path[::-1]
            queue.append(x)
    return None
