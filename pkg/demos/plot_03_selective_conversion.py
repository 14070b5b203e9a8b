"""
When does a candidate node convert?
===================================

BRUE_IC keeps a new node as a candidate, valued by random policies, until
the spread between policy means beats the noise inside them. Two extremes:
a deterministic choice (converts almost at once) and a pure lottery where
every policy has the same mean.
"""

# %%
import numpy as np

from mcplan.mdp import TableMdp
from mcplan.planners import BrueIcPlanner, PlannerConfig, conversion_statistics
from mcplan.rng import RandomSource

spread = TableMdp({("s", 0): [("s", 1.0, 1.0)], ("s", 1): [("s", 1.0, 0.0)]}, "s", 4, "spread")
lottery = TableMdp({("s", a): [("s", 0.5, 1.0), ("s", 0.5, 0.0)] for a in range(2)}, "s", 4, "lottery")


def evaluations_until_conversion(mdp, seeds=100):
    out = []
    for seed in range(seeds):
        p = BrueIcPlanner(mdp, PlannerConfig("brue_ic", phi=10, reward_range=4.0), RandomSource(seed))
        p.plan("s", 500)
        child = p.tree.get(("s", 1))
        out.append(sum(ps.n for ps in child.policies) if child.kind == "in" else np.inf)
    return np.array(out)


# %%
for mdp in (spread, lottery):
    ev = evaluations_until_conversion(mdp)
    print(f"{mdp.name:8s} converted in {np.isfinite(ev).mean():.0%} of runs, "
          f"median {np.median(ev):.0f} evaluations, max {ev.max():.0f}")

# %%
# Why the lottery converts too: with a handful of single-sample policies the
# within-policy variance estimate is still 0, so any difference between two
# observed returns looks like signal.
p = BrueIcPlanner(lottery, PlannerConfig("brue_ic", phi=10, reward_range=4.0), RandomSource(0))
p.plan("s", 3)
cand = p.tree.get(("s", 1))
if cand.policies:
    print(conversion_statistics(cand.policies))
