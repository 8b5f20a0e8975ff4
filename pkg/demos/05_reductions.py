"""Hardness constructions, checked against brute force on small inputs."""

import itertools

from cmapf import (
    Formula3Sat,
    GridGraph,
    TopoGraph,
    reduce_3sat_to_breach_sm,
    reduce_ghc_to_bcover_cc,
    reduce_reach_to_cover_dir,
    reduce_reach_to_cover_nc,
    search_bcover,
    search_breach,
    search_cover,
    search_reach,
)

phi = Formula3Sat(3, ((1, -2, 3), (2, 3)))
inst = reduce_3sat_to_breach_sm(phi)
print("3-sat gadget:", inst.graph.node_count, "nodes,", inst.problem)
out = search_breach(inst.graph, inst.problem.target, max_moves=3)
goals = {inst.node_labels[v] for v in out.execution.steps[1]}
print("staging nodes used:", sorted(goals))  # which literals the plan picked

unsat = reduce_3sat_to_breach_sm(Formula3Sat(1, ((1,), (-1,))))
print("x1 and not x1:", search_breach(unsat.graph, unsat.problem.target, max_moves=3).feasible)

# a directed path with self-loops, base at 0
g = TopoGraph(3, 0, [(0, 1), (1, 2), (0, 0), (1, 1), (2, 2)], [(0, 1), (1, 2)])
for target in ((1,), (1, 2)):
    for reduce in (reduce_reach_to_cover_dir, reduce_reach_to_cover_nc):
        inst = reduce(g, target)
        print(reduce.__name__, target, inst.graph.node_count, "nodes:",
              search_reach(g, target).feasible, "->", search_cover(inst.graph, inst.problem.agents).feasible)

# with one agent the directed construction needs a second agent to work
verbatim = reduce_reach_to_cover_dir(g, (1,), lift_single_agent=False)
print("verbatim single-agent version:", search_cover(verbatim.graph, 1).feasible)

for w, h in ((2, 2), (3, 2), (3, 3)):
    inst = reduce_ghc_to_bcover_cc(GridGraph.rectangle(w, h))
    print(f"{w}x{h} grid tour:", search_bcover(inst.graph, 1, inst.problem.max_moves).feasible)
