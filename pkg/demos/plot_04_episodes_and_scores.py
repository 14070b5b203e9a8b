"""
Episodes and relative scores
============================

Plan, act, re-plan: run whole episodes on the small shipped instances and
score planners relative to each other per run.
"""

# %%
from pathlib import Path

from mcplan.bench.runner import score_table, write_csv
from mcplan.bench.spec import load_spec

HERE = Path(__file__).resolve().parent
spec = load_spec(HERE.parent / "experiments" / "ippc_small.ini").with_(runs=5)
print(spec.id, [name for name, _ in spec.planners], "runs", spec.runs)

# %%
rows = score_table(spec)
print(write_csv([r for r in rows if r.metric == "score"]))
