"""Experiment specs, the seeded runner and the ``mcplan`` command line."""

from mcplan.bench.runner import (COLUMNS, Engine, Row, RunRecord, episode_rows, episodes, ippc_score, mean_stderr,
                                 regret_curve, run_episode, run_seed, score_table, sort_rows, write_csv)
from mcplan.bench.spec import BudgetSchedule, ExperimentSpec, load_spec, parse_spec

__all__ = [
    "COLUMNS", "BudgetSchedule", "Engine", "ExperimentSpec", "Row", "RunRecord", "episode_rows", "episodes",
    "ippc_score", "load_spec", "mean_stderr", "parse_spec", "regret_curve", "run_episode", "run_seed",
    "score_table", "sort_rows", "write_csv",
]
