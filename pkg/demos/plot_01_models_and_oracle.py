"""
Models and exact answers
========================

Load a sailing instance, solve it by backward induction and look at what
"simple regret" means at the root.
"""

# %%
from pathlib import Path

from mcplan.domains import load_instance
from mcplan.oracle import simple_regret, uniform_recommendation_regret, value_iteration

HERE = Path(__file__).resolve().parent
mdp = load_instance(HERE.parent / "instances" / "sailing_5x5.ini")
s0, H = mdp.initial_state, mdp.horizon
print(mdp.name, "start", s0, "horizon", H)

# %%
# Backward induction over (state, steps-to-go). The root Q values show how
# much each first heading costs when we act optimally afterwards.
vt = value_iteration(mdp)
print("V* =", vt.value(s0, H))
for a, q in sorted(vt.q_values(s0, H).items()):
    print(f"  heading {a}: Q* = {q:8.3f}   regret = {simple_regret(vt, s0, H, a):.3f}")

# %%
# Picking a first action at random gives the baseline every planner should beat.
print("uniform recommendation regret:", uniform_recommendation_regret(vt, s0, H))
