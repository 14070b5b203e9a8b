"""Online planners for generative MDPs.

Reference (pure Python) planners work with any :class:`~mcplan.mdp.GenerativeMdp`.
:mod:`mcplan.planners.fast` holds compiled equivalents for enumerable
models, used by the benchmark runner for large experiments.
"""

from __future__ import annotations

from typing import Optional

from mcplan.mdp import GenerativeMdp
from mcplan.planners.base import Planner
from mcplan.planners.brueic import (BrueIcPlanner, ConversionStats, brueic_convert, brueic_end_of_probe,
                                    brueic_evaluate, brueic_switch, conversion_passes, conversion_statistics)
from mcplan.planners.canonical import EpsilonGreedyPlanner, MabUniformPlanner, RandomPlanner, UctPlanner
from mcplan.planners.common import (KINDS, T_IN, T_OUT, ActionStats, Budget, PlannerConfig, PolicyStats,
                                    ProbeContext, ProbeRecord, SearchNode, SearchTree, argmax_visited,
                                    brueic_update_policy, epsilon_greedy_select, recommend, ucb1_select)
from mcplan.planners.mcts2e import BrueIPlanner, BruePlanner, Mcts2ePlanner, brue_switch
from mcplan.rng import RandomSource

PLANNERS = {
    "random": RandomPlanner,
    "mab_uniform": MabUniformPlanner,
    "egreedy": EpsilonGreedyPlanner,
    "uct": UctPlanner,
    "brue": BruePlanner,
    "brue_i": BrueIPlanner,
    "brue_ic": BrueIcPlanner,
}


def make_planner(mdp: GenerativeMdp, config: PlannerConfig, rng: RandomSource, **kwargs) -> Planner:
    return PLANNERS[config.kind](mdp, config, rng, **kwargs)


def mcts2e_probe(planner: Mcts2ePlanner, s, d: int) -> float:
    return planner.probe(s, d)


def _plan(kind, mdp, s0, budget, config, rng, horizon):
    config = PlannerConfig(kind) if config is None else config.with_(kind=kind)
    return make_planner(mdp, config, rng, horizon=horizon).plan(s0, budget)


def plan_random(mdp, s0, rng, horizon=None):
    return _plan("random", mdp, s0, 0, None, rng, horizon)


def plan_mab_uniform(mdp, s0, budget, rng, horizon=None):
    return _plan("mab_uniform", mdp, s0, budget, None, rng, horizon)


def plan_uct(mdp, s0, budget, config: Optional[PlannerConfig], rng, horizon=None):
    return _plan("uct", mdp, s0, budget, config, rng, horizon)


def plan_egreedy(mdp, s0, budget, config: Optional[PlannerConfig], rng, horizon=None):
    return _plan("egreedy", mdp, s0, budget, config, rng, horizon)


def plan_brue(mdp, s0, budget, config: Optional[PlannerConfig], rng, horizon=None):
    return _plan("brue", mdp, s0, budget, config, rng, horizon)


def plan_brue_i(mdp, s0, budget, config: Optional[PlannerConfig], rng, horizon=None):
    return _plan("brue_i", mdp, s0, budget, config, rng, horizon)


def plan_brue_ic(mdp, s0, budget, config: PlannerConfig, rng, horizon=None):
    return _plan("brue_ic", mdp, s0, budget, config, rng, horizon)


__all__ = [
    "KINDS", "PLANNERS", "T_IN", "T_OUT", "ActionStats", "Budget", "BrueIPlanner", "BrueIcPlanner",
    "BruePlanner", "ConversionStats", "EpsilonGreedyPlanner", "MabUniformPlanner", "Mcts2ePlanner",
    "Planner", "PlannerConfig", "PolicyStats", "ProbeContext", "ProbeRecord", "RandomPlanner",
    "SearchNode", "SearchTree", "UctPlanner", "argmax_visited", "brue_switch", "brueic_convert",
    "brueic_end_of_probe", "brueic_evaluate", "brueic_switch", "brueic_update_policy",
    "conversion_passes", "conversion_statistics", "epsilon_greedy_select", "make_planner",
    "mcts2e_probe", "plan_brue", "plan_brue_i", "plan_brue_ic", "plan_egreedy", "plan_mab_uniform",
    "plan_random", "plan_uct", "recommend", "ucb1_select",
]
