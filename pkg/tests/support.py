"""Independent oracles and generators shared by the test modules.

Nothing here calls into the planners; the oracles only read raw edge sets
from the graph so they cannot inherit a bug from the code under test.
"""

from __future__ import annotations

import itertools
import random
from collections import deque

from hypothesis import strategies as st

from cmapf.topo_graph import TopoGraph


class UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        self.parent[self.find(a)] = self.find(b)

    def groups(self):
        return len({self.find(x) for x in self.parent})


def uf_connected(g: TopoGraph, nodes) -> bool:
    nodes = set(nodes)
    if len(nodes) <= 1:
        return True
    uf = UnionFind(nodes)
    for u, v in g.comm_edges:
        if u in nodes and v in nodes:
            uf.union(u, v)
    return uf.groups() == 1


def oracle_valid(g: TopoGraph, config) -> bool:
    return uf_connected(g, set(config) | {g.base})


def oracle_legal(g: TopoGraph, c, c2) -> bool:
    """Some reordering of ``c2`` is reachable agent by agent from ``c``."""
    moves = g.move_edges
    return any(all((a, b) in moves for a, b in zip(c, p)) for p in set(itertools.permutations(c2)))


def oracle_failures(g: TopoGraph, steps, covering: bool = False) -> set[tuple]:
    """Expected ``(step, kind)`` failure pairs for a candidate execution."""
    out = set()
    for i, c in enumerate(steps):
        if not oracle_valid(g, c):
            out.add((i, "disconnected"))
        if i and not oracle_legal(g, steps[i - 1], c):
            out.add((i, "illegal_move"))
    if covering:
        if any(v != g.base for v in steps[0]):
            out.add((0, "bad_start"))
        if any(v != g.base for v in steps[-1]):
            out.add((len(steps) - 1, "bad_end"))
        if set(g.nodes) - {v for c in steps for v in c}:
            out.add((None, "uncovered_node"))
    return out


def _ordered_successors(g, c):
    succ = [[v for v in g.nodes if (u, v) in g.move_edges] for u in c]
    for nxt in itertools.product(*succ):
        if oracle_valid(g, nxt):
            yield nxt


def brute_reach_depths(g: TopoGraph, n: int, max_depth=None) -> dict:
    """BFS over ordered agent tuples with no symmetry reduction or pruning."""
    start = (g.base,) * n
    depth = {start: 0}
    queue = deque([start])
    while queue:
        c = queue.popleft()
        if max_depth is not None and depth[c] >= max_depth:
            continue
        for nxt in _ordered_successors(g, c):
            if nxt not in depth:
                depth[nxt] = depth[c] + 1
                queue.append(nxt)
    return depth


def brute_breach(g: TopoGraph, target, max_moves=None) -> bool:
    depths = brute_reach_depths(g, len(target), max_moves)
    goal = sorted(target)
    return any(sorted(c) == goal for c in depths)


def brute_min_cover(g: TopoGraph, n: int, max_moves=None):
    """Fewest transitions of a covering execution, or None."""
    full = frozenset(g.nodes)
    start = ((g.base,) * n, frozenset([g.base]))
    depth = {start: 0}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        c, seen = state
        if seen == full and all(v == g.base for v in c):
            return depth[state]
        if max_moves is not None and depth[state] >= max_moves:
            continue
        for nxt in _ordered_successors(g, c):
            s2 = (nxt, seen | set(nxt))
            if s2 not in depth:
                depth[s2] = depth[state] + 1
                queue.append(s2)
    return None


def truth_table_sat(var_count: int, clauses) -> bool:
    for values in itertools.product((False, True), repeat=var_count):
        if all(any(values[abs(l) - 1] == (l > 0) for l in c) for c in clauses):
            return True
    return False


def has_hamiltonian_cycle(cells) -> bool:
    """Tour enumeration over grid cells with 4-neighbour adjacency."""
    cells = sorted(cells)
    if len(cells) < 3:
        return False
    first, rest = cells[0], cells[1:]

    def adj(p, q):
        return abs(p[0] - q[0]) + abs(p[1] - q[1]) == 1

    for perm in itertools.permutations(rest):
        tour = (first,) + perm
        if all(adj(tour[i], tour[(i + 1) % len(tour)]) for i in range(len(tour))):
            return True
    return False


def random_graph(rng: random.Random, n: int, move_p=0.4, comm_p=0.3, loops=None, nc=False, undirected=False):
    """Unconstrained random topological graph with base 0."""
    moves = set()
    for u in range(n):
        for v in range(n):
            if u == v:
                keep = rng.random() < 0.5 if loops is None else loops
            else:
                keep = rng.random() < move_p
            if keep:
                moves.add((u, v))
    if undirected:
        moves |= {(v, u) for u, v in moves}
    comms = {(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < comm_p}
    if nc:
        comms |= {(min(u, v), max(u, v)) for u, v in moves if u != v}
    return TopoGraph(n, 0, moves, comms)


@st.composite
def topo_graphs(draw, min_nodes=1, max_nodes=5, reflexive=None):
    n = draw(st.integers(min_nodes, max_nodes))
    pairs = [(u, v) for u in range(n) for v in range(n)]
    moves = {p for p in pairs if draw(st.booleans())}
    if reflexive:
        moves |= {(v, v) for v in range(n)}
    comms = {(u, v) for u in range(n) for v in range(u + 1, n) if draw(st.booleans())}
    base = draw(st.integers(0, n - 1))
    return TopoGraph(n, base, moves, comms)


def configs(g: TopoGraph, max_agents=3):
    return st.lists(st.integers(0, g.node_count - 1), min_size=1, max_size=max_agents)
