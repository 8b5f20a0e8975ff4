"""A grid world with an obstacle, coerced into each graph class.

Line of sight on a grid already keeps most links walkable, so the
sight-moveable closure rarely has anything to prune here.
"""

from cmapf import classify, export_dot, gen_grid_instance, plan_cover_sm, search_cover

obstacles = {(1, 1), (2, 1)}
for cls in ("dir", "nc", "sm", "cc"):
    g = gen_grid_instance(4, 3, obstacles, 2.3, cls)
    r = classify(g)
    print(f"{cls:>3}: {g.node_count} nodes, {len(g.comm_edges)} links, sm={r.sight_moveable} cc={r.complete_communication}")

g = gen_grid_instance(4, 3, obstacles, 2.3, "sm")
for n in (1, 2, 3):
    print(f"{n} agents: poly={plan_cover_sm(g, n).feasible} exact={search_cover(g, n).feasible}")

plan = plan_cover_sm(g, 2).execution
print(f"poly plan: {plan.moves} moves; shortest: {search_cover(g, 2).execution.moves} moves")
print(export_dot(g).splitlines()[:4])
