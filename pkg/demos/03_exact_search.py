"""Exhaustive search: how many agents does the fig1 mission need?"""

import time

from cmapf import SearchBudget, fig1, search_bcover, search_cover, validate_execution
from cmapf.errors import BudgetExhausted

g = fig1()
for n in (1, 2, 3):
    t = time.perf_counter()
    out = search_cover(g, n)
    print(f"{n} agents: feasible={out.feasible} states={out.states_explored} ({time.perf_counter() - t:.2f}s)")

plan = search_cover(g, 3).execution
for step in plan:
    print("  ", step)
print("covering and valid:", validate_execution(g, plan, require_covering=True).ok)

# BFS finds a shortest covering plan, so one move less is impossible
print("bcover in", plan.moves - 1, "moves:", search_bcover(g, 3, plan.moves - 1).feasible)

# running out of budget is reported separately from infeasibility
try:
    search_cover(g, 3, budget=SearchBudget(max_states=200))
except BudgetExhausted as exc:
    print("budget exhausted after", exc.states_explored, "states")
