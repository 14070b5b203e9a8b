"""Experiment spec files.

One experiment per INI file::

    [experiment]
    id = sailing5_regret
    mode = regret-curve            ; regret-curve | episode | score-table
    domain = ../instances/sailing_5x5.ini   ; paths relative to this file;
                                            ; score-table accepts several, comma separated
    runs = 300
    base_seed = 0
    budgets = 100, 1000, 10000     ; regret-curve: one point per value
    engine = auto                  ; auto | fast | reference
    workers = 1

    ; episode / score-table: per-step budget, linear from budget_start to budget_end
    budget_unit = iterations       ; iterations | milliseconds
    budget_start = 1000
    budget_end = 100
    replanning = receding          ; receding (H - t) | fixed (H)

    [planner:brue_ic]              ; one section per planner; the suffix names it
    kind = brue_ic
    phi = 10
    psi = 0.36

Planner keys: ``kind`` (required), ``c``, ``epsilon``, ``phi``, ``psi``,
``reward_range``, ``conversion``. ``brue_ic`` needs ``phi`` and one of
``psi`` / ``reward_range``.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, replace
from pathlib import Path
from typing import List, Optional, Tuple, Union

from mcplan.errors import ConfigError
from mcplan.planners.common import Budget, PlannerConfig

MODES = ("regret-curve", "episode", "score-table")


@dataclass(frozen=True)
class BudgetSchedule:
    """Per-step budget decreasing linearly from ``start`` (step 0) to ``end`` (last step)."""

    start: float
    end: float
    unit: str = "iterations"

    def __post_init__(self):
        if self.unit not in ("iterations", "milliseconds"):
            raise ConfigError(f"unknown budget unit {self.unit!r}")
        if not (self.start > 0 and self.end > 0):
            raise ConfigError("budgets must be > 0")

    def at(self, t: int, steps: int) -> Budget:
        v = self.start if steps <= 1 else self.start + (self.end - self.start) * t / (steps - 1)
        if self.unit == "iterations":
            return Budget(iterations=int(round(v)))
        return Budget(milliseconds=float(v))


@dataclass(frozen=True)
class ExperimentSpec:
    id: str
    mode: str
    domains: Tuple[Path, ...]
    planners: Tuple[Tuple[str, PlannerConfig], ...]
    runs: int
    base_seed: int = 0
    budgets: Tuple[int, ...] = ()
    schedule: Optional[BudgetSchedule] = None
    replanning: str = "receding"
    engine: str = "auto"
    workers: int = 1

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if not self.planners:
            raise ConfigError("an experiment needs at least one planner")
        if self.runs < 1:
            raise ConfigError("runs must be >= 1")
        if self.mode == "regret-curve" and not self.budgets:
            raise ConfigError("regret-curve needs budgets")
        if any(b <= 0 for b in self.budgets):
            raise ConfigError("budgets must be > 0")
        if self.mode != "regret-curve" and self.schedule is None:
            raise ConfigError(f"{self.mode} needs budget_start and budget_end")
        if self.mode == "score-table" and len(self.planners) < 2:
            raise ConfigError("score-table needs at least two planners")
        if self.replanning not in ("receding", "fixed"):
            raise ConfigError("replanning must be 'receding' or 'fixed'")
        if self.engine not in ("auto", "fast", "reference"):
            raise ConfigError("engine must be auto, fast or reference")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")

    def with_(self, **changes) -> "ExperimentSpec":
        return replace(self, **changes)


_PLANNER_KEYS = {"kind", "c", "epsilon", "phi", "psi", "reward_range", "conversion"}


def _planner(name: str, sec) -> PlannerConfig:
    unknown = set(sec) - _PLANNER_KEYS
    if unknown:
        raise ConfigError(f"planner {name!r}: unknown keys {sorted(unknown)}")
    if "kind" not in sec:
        raise ConfigError(f"planner {name!r}: missing kind")
    kw = {"kind": sec["kind"].strip()}
    for key in ("c", "epsilon", "psi", "reward_range"):
        if key in sec:
            kw[key] = float(sec[key])
    if "phi" in sec:
        kw["phi"] = int(sec["phi"])
    if "conversion" in sec:
        kw["conversion"] = sec["conversion"].strip()
    if kw["kind"] == "brue_ic":
        if "phi" not in kw:
            raise ConfigError(f"planner {name!r}: brue_ic needs phi")
        if "psi" not in kw and "reward_range" not in kw:
            raise ConfigError(f"planner {name!r}: brue_ic needs psi or reward_range")
    return PlannerConfig(**kw)


def _ints(text: str) -> Tuple[int, ...]:
    return tuple(int(float(v)) for v in text.replace(",", " ").split())


def parse_spec(text: str, base_dir: Union[str, Path] = ".") -> ExperimentSpec:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    cp.read_string(text)
    if not cp.has_section("experiment"):
        raise ConfigError("spec needs an [experiment] section")
    ex = dict(cp["experiment"])
    base_dir = Path(base_dir)
    try:
        domains = tuple((base_dir / p.strip()).resolve() for p in ex.pop("domain").split(",") if p.strip())
        spec_id = ex.pop("id")
        mode = ex.pop("mode")
        runs = int(ex.pop("runs"))
    except KeyError as e:
        raise ConfigError(f"[experiment] missing key {e.args[0]!r}") from None
    budgets = _ints(ex.pop("budgets", ""))
    schedule = None
    if "budget_start" in ex or "budget_end" in ex:
        try:
            schedule = BudgetSchedule(float(ex.pop("budget_start")), float(ex.pop("budget_end")),
                                      ex.pop("budget_unit", "iterations").strip())
        except KeyError as e:
            raise ConfigError(f"[experiment] missing key {e.args[0]!r}") from None
    ex.pop("budget_unit", None)
    kw = dict(base_seed=int(ex.pop("base_seed", "0")), replanning=ex.pop("replanning", "receding").strip(),
              engine=ex.pop("engine", "auto").strip(), workers=int(ex.pop("workers", "1")))
    if ex:
        raise ConfigError(f"[experiment] unknown keys {sorted(ex)}")
    planners: List[Tuple[str, PlannerConfig]] = []
    for sec in cp.sections():
        if sec == "experiment":
            continue
        if not sec.startswith("planner:"):
            raise ConfigError(f"unknown section [{sec}]")
        name = sec.split(":", 1)[1].strip()
        planners.append((name, _planner(name, cp[sec])))
    return ExperimentSpec(spec_id, mode, domains, tuple(planners), runs, budgets=budgets, schedule=schedule, **kw)


def load_spec(path: Union[str, Path]) -> ExperimentSpec:
    path = Path(path)
    return parse_spec(path.read_text(), path.parent)
