"""Grid navigation with per-column risk of disappearing.

The agent moves one cell per step (N/E/S/W; moving off the grid leaves it
in place). Whatever cell it ends the step in, it vanishes with that
column's disappearance probability, landing in the absorbing ``DEAD``
state. Every live step pays ``step_reward``; arriving at the goal pays
``goal_reward`` once on top, after which the goal absorbs with no reward.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from mcplan.errors import ConfigError
from mcplan.mdp import GenerativeMdp, Outcome

DEAD = (-1, -1)
MOVES = {"N": (0, 1), "E": (1, 0), "S": (0, -1), "W": (-1, 0)}
ACTIONS = ("N", "E", "S", "W")


@dataclass(frozen=True)
class NavigationConfig:
    width: int
    height: int
    disappearance: Tuple[float, ...]
    start: Tuple[int, int]
    goal: Tuple[int, int]
    step_reward: float
    goal_reward: float
    horizon: int
    name: str = "navigation"

    def validate(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ConfigError("navigation grid must be non-empty")
        if len(self.disappearance) != self.width:
            raise ConfigError("need one disappearance probability per column")
        if any(not 0.0 <= p <= 1.0 for p in self.disappearance):
            raise ConfigError("disappearance probabilities must lie in [0, 1]")
        if tuple(self.start) == tuple(self.goal):
            raise ConfigError("start and goal must differ")
        for cell in (self.start, self.goal):
            if not (0 <= cell[0] < self.width and 0 <= cell[1] < self.height):
                raise ConfigError(f"cell {cell} outside the grid")
        if self.step_reward > 0:
            raise ConfigError("step_reward must not be positive")
        if self.horizon < 1:
            raise ConfigError("horizon must be >= 1")


class NavigationMdp(GenerativeMdp):
    has_distributions = True

    def __init__(self, config: NavigationConfig):
        config.validate()
        self.config = config
        super().__init__(tuple(config.start), config.horizon)
        self.name = config.name
        self.goal = tuple(config.goal)

    def actions(self, state):
        return ACTIONS

    def is_absorbing(self, state):
        return state == DEAD or state == self.goal

    def _target(self, state, action):
        dx, dy = MOVES[action]
        nx, ny = state[0] + dx, state[1] + dy
        if 0 <= nx < self.config.width and 0 <= ny < self.config.height:
            return nx, ny
        return state

    def sample(self, state, action, rng):
        if self.is_absorbing(state):
            return state, 0.0
        target = self._target(state, action)
        step = float(self.config.step_reward)
        if rng.random() < self.config.disappearance[target[0]]:
            return DEAD, step
        if target == self.goal:
            return target, step + float(self.config.goal_reward)
        return target, step

    def distribution(self, state, action):
        if self.is_absorbing(state):
            return [Outcome(state, 1.0, 0.0)]
        target = self._target(state, action)
        p = float(self.config.disappearance[target[0]])
        step = float(self.config.step_reward)
        live = step + (float(self.config.goal_reward) if target == self.goal else 0.0)
        outs = [Outcome(DEAD, p, step), Outcome(target, 1.0 - p, live)]
        return [o for o in outs if o.prob > 0]


def build_navigation(config: NavigationConfig) -> NavigationMdp:
    return NavigationMdp(config)
