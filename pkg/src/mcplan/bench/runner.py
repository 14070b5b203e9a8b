"""Seeded experiment runner: regret curves, episodes and relative score tables.

Every random stream is derived from labels, never from execution order:

* run ``i``'s seed is ``derive_seed(base_seed, ("run", i))``;
* the environment draw at step ``t`` uses ``(run seed, ("env", t))``, shared
  by all planners so matched action sequences see matched transitions;
* a planner's stream uses ``(run seed, ("planner", name, t))`` in episodes and
  ``(run seed, ("planner", name, budget))`` in regret curves.

Results are therefore independent of planner order and worker count.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional, Sequence, TextIO, Tuple

from mcplan.domains import load_instance
from mcplan.errors import CapabilityError, ConfigError
from mcplan.mdp import GenerativeMdp
from mcplan.oracle import ValueTables, simple_regret, value_iteration
from mcplan.planners import make_planner
from mcplan.planners.common import Budget, PlannerConfig
from mcplan.planners.fast import FastPlanner
from mcplan.planners.tabular import TabularMdp, compile_mdp
from mcplan.rng import RandomSource, derive_seed
from mcplan.bench.spec import BudgetSchedule, ExperimentSpec

log = logging.getLogger(__name__)

COLUMNS = ("experiment", "domain", "planner", "seed_or_budget", "metric", "value", "stderr")


class Row(NamedTuple):
    experiment: str
    domain: str
    planner: str
    seed_or_budget: str
    metric: str
    value: float
    stderr: Optional[float]


@dataclass(frozen=True)
class RunRecord:
    planner: str
    seed: int
    actions: Tuple
    budgets: Tuple[int, ...]  # iterations actually consumed per step
    rewards: Tuple[float, ...]
    total: float
    regret: Optional[float] = None


def run_seed(base_seed: int, run: int) -> int:
    return derive_seed(base_seed, ("run", run))


def mean_stderr(values: Sequence[float]) -> Tuple[float, float]:
    """Mean and standard error (sample std / sqrt(n)); stderr is 0 for a single value."""
    n = len(values)
    m = math.fsum(values) / n
    if n < 2:
        return m, 0.0
    var = math.fsum((v - m) ** 2 for v in values) / (n - 1)
    return m, math.sqrt(var / n)


def ippc_score(totals: Sequence[float]) -> List[float]:
    """``(total - worst) / (best - worst)`` per planner; 1 for everyone when all tie."""
    if len(totals) < 2:
        raise ConfigError("relative scores need at least two planners")
    best = max(totals)
    worst = min(totals)
    if best == worst:
        return [1.0] * len(totals)
    return [(t - worst) / (best - worst) for t in totals]


class Engine:
    """Plans with the compiled planners when possible, else with the reference ones."""

    def __init__(self, mdp: GenerativeMdp, choice: str = "auto", trace: Optional[List[str]] = None):
        self.mdp = mdp
        self.choice = choice
        self.trace = trace
        self.tab: Optional[TabularMdp] = None
        if choice in ("auto", "fast") and trace is None:
            try:
                self.tab = compile_mdp(mdp)
            except CapabilityError:
                if choice == "fast":
                    raise
        if choice == "fast" and self.tab is None:
            raise ConfigError("the fast engine cannot emit probe traces")

    def plan(self, config: PlannerConfig, state, horizon: int, budget: Budget, seed: int, label: str = ""):
        """Return ``(action, iterations used)``."""
        if self.tab is not None and budget.iterations is not None:
            fp = FastPlanner(self.tab, config, horizon)
            a = fp.plan(state, budget.iterations, seed)
            return a, (0 if config.kind == "random" else budget.iterations)
        if self.choice == "fast":
            raise ConfigError("the fast engine needs iteration budgets")
        planner = make_planner(self.mdp, config, RandomSource(seed), horizon=horizon,
                               audit=self.trace is not None)
        a = planner.plan(state, budget)
        if self.trace is not None:
            self.trace.extend(f"{label}\t{rec.line()}" for rec in planner.trace)
        return a, planner.iterations


def run_episode(mdp: GenerativeMdp, name: str, config: PlannerConfig, schedule: BudgetSchedule, seed: int,
                engine: Optional[Engine] = None, replanning: str = "receding") -> RunRecord:
    """Plan-act loop over ``H`` steps from the initial state, re-planning from scratch each step."""
    engine = Engine(mdp) if engine is None else engine
    H = mdp.horizon
    s = mdp.initial_state
    actions, used, rewards = [], [], []
    for t in range(H):
        h = H - t if replanning == "receding" else H
        a, n = engine.plan(config, s, h, schedule.at(t, H), derive_seed(seed, ("planner", name, t)),
                           label=f"{name}\t{seed}\t{t}")
        s, r = mdp.sample(s, a, RandomSource(derive_seed(seed, ("env", t))))
        actions.append(a)
        used.append(n)
        rewards.append(r)
    return RunRecord(name, seed, tuple(actions), tuple(used), tuple(rewards), math.fsum(rewards))


def _map(fn: Callable, items: Iterable, workers: int) -> List:
    items = list(items)
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _domain_label(mdp: GenerativeMdp) -> str:
    return mdp.name


def regret_curve(spec: ExperimentSpec, workers: Optional[int] = None, trace: Optional[List[str]] = None,
                 tables: Optional[Dict[Path, ValueTables]] = None) -> List[Row]:
    """Mean simple regret of the first recommendation, per planner and budget."""
    workers = spec.workers if workers is None else workers
    rows: List[Row] = []
    for path in spec.domains:
        mdp = load_instance(path)
        vt = value_iteration(mdp) if tables is None or path not in tables else tables[path]
        engine = Engine(mdp, spec.engine, trace)
        s0, H = mdp.initial_state, mdp.horizon

        def one(task):
            name, cfg, budget, run = task
            seed = derive_seed(run_seed(spec.base_seed, run), ("planner", name, budget))
            a, _ = engine.plan(cfg, s0, H, Budget(iterations=budget), seed, label=f"{name}\t{run}\t{budget}")
            return simple_regret(vt, s0, H, a)

        for name, cfg in spec.planners:
            for budget in spec.budgets:
                log.info("%s %s budget=%d runs=%d", spec.id, name, budget, spec.runs)
                regrets = _map(one, [(name, cfg, budget, i) for i in range(spec.runs)], workers)
                m, se = mean_stderr(regrets)
                rows.append(Row(spec.id, _domain_label(mdp), name, str(budget), "regret", m, se))
    return sort_rows(rows)


def episodes(spec: ExperimentSpec, path: Path, workers: Optional[int] = None,
             trace: Optional[List[str]] = None) -> Dict[str, List[RunRecord]]:
    workers = spec.workers if workers is None else workers
    mdp = load_instance(path)
    engine = Engine(mdp, spec.engine, trace)
    out = {}
    for name, cfg in spec.planners:
        out[name] = _map(lambda i: run_episode(mdp, name, cfg, spec.schedule, run_seed(spec.base_seed, i),
                                               engine, spec.replanning),
                         range(spec.runs), workers)
    return out


def episode_rows(spec: ExperimentSpec, workers: Optional[int] = None, trace: Optional[List[str]] = None) -> List[Row]:
    """One ``total_reward`` row per (planner, run) plus a per-step ``reward@t`` trace."""
    rows: List[Row] = []
    for path in spec.domains:
        dom = load_instance(path).name
        for name, records in episodes(spec, path, workers, trace).items():
            for i, rec in enumerate(records):
                rows.append(Row(spec.id, dom, name, str(i), "total_reward", rec.total, None))
                for t, r in enumerate(rec.rewards):
                    rows.append(Row(spec.id, dom, name, str(i), f"reward@{t}", r, None))
            m, se = mean_stderr([r.total for r in records])
            rows.append(Row(spec.id, dom, name, "mean", "total_reward", m, se))
    return sort_rows(rows)


def score_table(spec: ExperimentSpec, workers: Optional[int] = None, trace: Optional[List[str]] = None,
                totals: Optional[Dict[str, Dict[str, List[float]]]] = None) -> List[Row]:
    """Per-run IPPC relative scores averaged per (domain, planner).

    ``totals`` (domain -> planner -> per-run totals) skips the episode runs;
    useful for checking the arithmetic on hand-built numbers.
    """
    if totals is None:
        totals = {}
        for path in spec.domains:
            recs = episodes(spec, path, workers, trace)
            totals[load_instance(path).name] = {n: [r.total for r in rs] for n, rs in recs.items()}
    rows: List[Row] = []
    for dom, per in totals.items():
        names = list(per)
        runs = len(per[names[0]])
        scores: Dict[str, List[float]] = {n: [] for n in names}
        for i in range(runs):
            for n, sc in zip(names, ippc_score([per[n][i] for n in names])):
                scores[n].append(sc)
        for n in names:
            m, se = mean_stderr(scores[n])
            rows.append(Row(spec.id, dom, n, str(runs), "score", m, se))
            m, se = mean_stderr(per[n])
            rows.append(Row(spec.id, dom, n, str(runs), "total_reward", m, se))
    return sort_rows(rows)


def _num_key(text: str):
    try:
        return (0, float(text), "")
    except ValueError:
        return (1, 0.0, text)


def sort_rows(rows: Iterable[Row]) -> List[Row]:
    return sorted(rows, key=lambda r: (r.experiment, r.domain, r.planner, _num_key(r.seed_or_budget), r.metric))


def write_csv(rows: Iterable[Row], out: Optional[TextIO] = None) -> str:
    """CSV with a fixed header; floats written with ``repr`` so output is byte-stable."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in rows:
        w.writerow([r.experiment, r.domain, r.planner, r.seed_or_budget, r.metric, repr(float(r.value)),
                    "" if r.stderr is None else repr(float(r.stderr))])
    text = buf.getvalue()
    if out is not None:
        out.write(text)
    return text
