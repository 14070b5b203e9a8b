"""
Simple regret against budget
============================

UCT, BRUE and BRUE_IC on the 3x3 sailing instance, using the compiled
engine. Each point averages the regret of the first recommendation over
independent seeds.
"""

# %%
from pathlib import Path

import numpy as np

from mcplan.domains import load_instance
from mcplan.oracle import simple_regret, value_iteration
from mcplan.planners import PlannerConfig
from mcplan.planners.fast import FastPlanner
from mcplan.planners.tabular import compile_mdp

HERE = Path(__file__).resolve().parent
mdp = load_instance(HERE.parent / "instances" / "sailing_3x3.ini")
vt = value_iteration(mdp)
tab = compile_mdp(mdp)
s0, H = mdp.initial_state, mdp.horizon

configs = {
    "uct": PlannerConfig("uct"),
    "brue": PlannerConfig("brue"),
    "brue_ic": PlannerConfig("brue_ic", phi=10, psi=0.04),
}
budgets = [10, 100, 1000, 10_000]
runs = 200

# %%
print("budget " + " ".join(f"{name:>9}" for name in configs))
for b in budgets:
    cells = []
    for name, cfg in configs.items():
        fp = FastPlanner(tab, cfg)
        r = [simple_regret(vt, s0, H, fp.plan(s0, b, seed)) for seed in range(runs)]
        cells.append(f"{np.mean(r):9.3f}")
    print(f"{b:>6} " + " ".join(cells))
