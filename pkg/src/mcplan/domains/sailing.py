"""Sailing: reach a goal cell on a grid under a Markov wind.

State is ``(x, y, wind)``; the wind index names the compass direction the
wind blows toward (0 = north, clockwise). Headings use the same indexing.
Movement is deterministic, only the wind is stochastic. The move cost
depends on the angle between heading and wind (0 = running downwind);
heading straight into the wind (angle 4) is not applicable. Bumping into
the border leaves the boat in place and still costs the move. The goal
cell absorbs with zero further reward, whatever the wind.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from mcplan.errors import ConfigError
from mcplan.mdp import GenerativeMdp, Outcome

DIRECTIONS = ((0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1))
N_WINDS = 8


def angle(heading: int, wind: int) -> int:
    """Angular distance between two compass indices, in 45 degree steps (0..4)."""
    k = (heading - wind) % N_WINDS
    return min(k, N_WINDS - k)


@dataclass(frozen=True)
class SailingConfig:
    width: int
    height: int
    start: Tuple[int, int]
    goal: Tuple[int, int]
    initial_wind: int
    p_stay: float
    costs: Tuple[float, float, float, float]
    horizon: int
    wind_directions: int = N_WINDS
    name: str = "sailing"

    def validate(self) -> None:
        if self.width < 2 or self.height < 2:
            raise ConfigError("sailing grid must be at least 2x2")
        if self.wind_directions != N_WINDS:
            raise ConfigError("sailing supports exactly 8 wind directions")
        if not 0.0 <= self.p_stay <= 1.0:
            raise ConfigError(f"p_stay={self.p_stay} outside [0, 1]")
        if len(self.costs) != 4 or any(c < 0 for c in self.costs):
            raise ConfigError("costs must be four non-negative numbers (angles 0..3)")
        for cell in (self.start, self.goal):
            if not (0 <= cell[0] < self.width and 0 <= cell[1] < self.height):
                raise ConfigError(f"cell {cell} outside the grid")
        if not 0 <= self.initial_wind < N_WINDS:
            raise ConfigError(f"initial_wind={self.initial_wind} outside 0..7")
        if self.horizon < 1:
            raise ConfigError("horizon must be >= 1")


class SailingMdp(GenerativeMdp):
    has_distributions = True

    def __init__(self, config: SailingConfig):
        config.validate()
        self.config = config
        super().__init__((config.start[0], config.start[1], config.initial_wind), config.horizon)
        self.name = config.name
        self.goal = tuple(config.goal)
        self._actions = tuple(tuple(h for h in range(N_WINDS) if angle(h, w) != 4) for w in range(N_WINDS))
        self._p_side = (1.0 - config.p_stay) / 2.0

    def actions(self, state):
        return self._actions[state[2]]

    def is_absorbing(self, state):
        return (state[0], state[1]) == self.goal

    def _move(self, x, y, heading):
        dx, dy = DIRECTIONS[heading]
        nx, ny = x + dx, y + dy
        if 0 <= nx < self.config.width and 0 <= ny < self.config.height:
            return nx, ny
        return x, y

    def sample(self, state, action, rng):
        x, y, w = state
        if (x, y) == self.goal:
            return state, 0.0
        nx, ny = self._move(x, y, action)
        u = rng.random()
        if u < self.config.p_stay:
            w2 = w
        elif u < self.config.p_stay + self._p_side:
            w2 = (w - 1) % N_WINDS
        else:
            w2 = (w + 1) % N_WINDS
        return (nx, ny, w2), -float(self.config.costs[angle(action, w)])

    def distribution(self, state, action):
        x, y, w = state
        if (x, y) == self.goal:
            return [Outcome(state, 1.0, 0.0)]
        nx, ny = self._move(x, y, action)
        r = -float(self.config.costs[angle(action, w)])
        outs = [Outcome((nx, ny, w), self.config.p_stay, r),
                Outcome((nx, ny, (w - 1) % N_WINDS), self._p_side, r),
                Outcome((nx, ny, (w + 1) % N_WINDS), self._p_side, r)]
        return sorted((o for o in outs if o.prob > 0), key=lambda o: o.state)


def build_sailing(config: SailingConfig) -> SailingMdp:
    return SailingMdp(config)
