"""Base class shared by the reference planners."""

from __future__ import annotations

from typing import Callable, Hashable, List, Optional, Union

from mcplan.mdp import GenerativeMdp
from mcplan.planners.common import (Budget, BudgetClock, PlannerConfig, ProbeRecord, SearchNode, SearchTree,
                                    planning_horizon, recommend)
from mcplan.rng import RandomSource

UpdateHook = Callable[[tuple, Hashable, float], None]


class Planner:
    """Common plumbing of the reference planners.

    A planner owns its RandomSource; each :meth:`plan` call builds a fresh
    search tree from the given state and returns one recommended action.
    After the call, ``tree``, ``root`` and ``iterations`` describe the search.

    ``on_update(node_key, action, value)`` fires on every action-statistics
    update; ``audit=True`` records per-probe update counts in
    ``updates_per_probe`` and, for probe-based planners, a :class:`ProbeRecord`
    per probe in ``trace``.
    """

    kind = "abstract"

    def __init__(self, mdp: GenerativeMdp, config: PlannerConfig, rng: RandomSource,
                 horizon: Optional[int] = None, on_update: Optional[UpdateHook] = None,
                 audit: bool = False):
        self.mdp = mdp
        self.config = config
        self.rng = rng
        self.horizon = planning_horizon(mdp, horizon)
        self.on_update = on_update
        self.audit = audit
        self.tree: Optional[SearchTree] = None
        self.root: Optional[SearchNode] = None
        self.iterations = 0
        self.updates_per_probe: List[int] = []
        self.trace: List[ProbeRecord] = []
        self._updates = 0

    def _reset(self, state) -> None:
        self.tree = SearchTree()
        self.root = self.tree.add((state, 0), self.mdp.actions(state), kind=self._root_kind())
        self.iterations = 0
        self.updates_per_probe = []
        self.trace = []

    def _root_kind(self) -> str:
        return "in"

    def _update(self, node: SearchNode, index: int, value: float) -> None:
        node.update(index, value)
        self._updates += 1
        if self.on_update is not None:
            self.on_update(node.key, node.actions[index], value)

    def _uniform(self, state):
        acts = self.mdp.actions(state)
        return acts[self.rng.randbelow(len(acts))]

    def _rollout(self, state, depth: int) -> float:
        total = 0.0
        s = state
        for _ in range(depth, self.horizon):
            s, r = self.mdp.sample(s, self._uniform(s), self.rng)
            total += r
        return total

    def plan(self, state=None, budget: Union[Budget, int] = 0):
        state = self.mdp.initial_state if state is None else state
        self._reset(state)
        clock = BudgetClock(Budget.of(budget))
        while clock.next():
            self.iterations += 1
            self._updates = 0
            self.iterate()
            if self.audit:
                self.updates_per_probe.append(self._updates)
        return self.recommend()

    def iterate(self) -> None:
        raise NotImplementedError

    def recommend(self):
        return recommend(self.root, self.rng)
