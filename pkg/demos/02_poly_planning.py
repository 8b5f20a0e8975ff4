"""Polynomial planners on sight-moveable and complete-communication graphs."""

from cmapf import gen_random, k3, p3, plan_breach_cc, plan_cover_sm, plan_reach_sm, validate_execution

g = p3()
out = plan_reach_sm(g, (1, 2))
print("reach (1,2):", out.execution.steps)

out = plan_reach_sm(g, (2,))
print("reach (2,) feasible:", out.feasible, "witness:", out.witness)  # a lone agent at 2 loses the base

for n in (1, 2):
    out = plan_cover_sm(g, n)
    print(f"cover with {n}:", out.feasible, out.execution.steps if out.feasible else out.witness)

# bounded reachability is easy when every node hears every other one
print("k3 breach in 1 move:", plan_breach_cc(k3(), (1, 2), 1).execution.steps)

# synthesized plans are long but always valid
g = gen_random(8, 0.45, 0.4, "sm", seed=11)
out = plan_cover_sm(g, 3)
if out.feasible:
    print("random sm graph: cover in", out.execution.moves, "moves,",
          "valid:", validate_execution(g, out.execution, require_covering=True).ok)
else:
    print("random sm graph: needs more agents, witness", out.witness)
