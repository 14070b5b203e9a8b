"""
Reading a probe trace
=====================

Reference planners can log one line per probe: iteration, switching value,
retract flag, the updated (node, action) pair and any conversions.
"""

# %%
from mcplan.mdp import TableMdp
from mcplan.planners import PlannerConfig, make_planner
from mcplan.rng import RandomSource

grid = TableMdp({
    ("r", "L"): [("u", 0.5, 0.0), ("v", 0.5, 1.0)], ("r", "R"): [("v", 1.0, 0.5)],
    ("u", "L"): [("u", 1.0, 1.0)], ("u", "R"): [("v", 0.5, 0.0), ("r", 0.5, 2.0)],
    ("v", "L"): [("r", 1.0, 0.0)], ("v", "R"): [("u", 0.25, 3.0), ("v", 0.75, -1.0)],
}, "r", 4, "grid")

# %%
# BRUE: the switch cycles H..1 and the update sits one level above it.
p = make_planner(grid, PlannerConfig("brue"), RandomSource(1), audit=True)
p.plan("r", 8)
for rec in p.trace:
    print(rec.line())

# %%
# BRUE_IC: probes stop at candidates; a stop above the switch is a retract.
p = make_planner(grid, PlannerConfig("brue_ic", phi=3, psi=0.01), RandomSource(1), audit=True)
p.plan("r", 12)
for rec in p.trace:
    print(rec.line())
print("recommendation:", p.recommend())
