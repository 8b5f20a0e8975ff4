"""Bounded planning through the CNF encoding."""

from cmapf import fig1, p3, plan_bcover_sat, plan_breach_sat
from cmapf.sat_planner import encode_breach
from cmapf.sat_solver import sat_solve, to_dimacs

f, vm = encode_breach(p3(), (1, 2), 2, 2)
print(f"p3 breach encoding: {f.var_count} vars, {len(f.clauses)} clauses")
print("pos/occ/lvl:", vm.pos_count, vm.occ_count, vm.lvl_count)
print("satisfiable:", sat_solve(f) is not None)
print(to_dimacs(f).splitlines()[0])

g = fig1()
for ell in (9, 10, 12):
    out = plan_bcover_sat(g, 3, ell)
    print(f"fig1 bcover, 3 agents, <= {ell} moves:", out.feasible)

out = plan_breach_sat(g, (4, 6, 9), 3)
print("fig1 breach (4,6,9) in 3 moves:", out.execution.steps if out.feasible else "no")
