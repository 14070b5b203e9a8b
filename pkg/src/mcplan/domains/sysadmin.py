"""SysAdmin: keep a network of machines running.

State is a bitmask of running machines (bit ``i`` set = machine ``i`` up),
starting with every machine up. Actions reboot one machine or do nothing
(``NOOP``). Machines evolve independently given the state: a rebooted
machine comes up with ``p_reboot``; a running machine stays up with
probability ``(1 - p_fail) * (1 - p_infect) ** (down neighbours)``; a down
machine stays down. The step reward is the number of machines running in
the current state times ``reward_per_running``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from mcplan.errors import CapabilityError, ConfigError
from mcplan.mdp import GenerativeMdp, Outcome

NOOP = -1
MAX_EXPLICIT = 12


def ring(n: int) -> Tuple[Tuple[int, int], ...]:
    return tuple((i, (i + 1) % n) for i in range(n)) if n > 2 else ((0, 1),)


@dataclass(frozen=True)
class SysAdminConfig:
    n: int
    edges: Tuple[Tuple[int, int], ...]
    p_fail: float
    p_infect: float
    p_reboot: float
    reward_per_running: float
    horizon: int
    explicit: bool = True
    name: str = "sysadmin"

    def validate(self) -> None:
        if self.n < 2:
            raise ConfigError("sysadmin needs at least 2 machines")
        for p in (self.p_fail, self.p_infect, self.p_reboot):
            if not 0.0 <= p <= 1.0:
                raise ConfigError(f"probability {p} outside [0, 1]")
        for i, j in self.edges:
            if not (0 <= i < self.n and 0 <= j < self.n) or i == j:
                raise ConfigError(f"bad edge {(i, j)}")
        if self.horizon < 1:
            raise ConfigError("horizon must be >= 1")


class SysAdminMdp(GenerativeMdp):
    def __init__(self, config: SysAdminConfig):
        config.validate()
        if config.explicit and config.n > MAX_EXPLICIT:
            raise CapabilityError(f"explicit distributions need n <= {MAX_EXPLICIT}, got {config.n}")
        self.config = config
        super().__init__((1 << config.n) - 1, config.horizon)
        self.name = config.name
        self.has_distributions = config.explicit
        nbrs = [set() for _ in range(config.n)]
        for i, j in config.edges:
            nbrs[i].add(j)
            nbrs[j].add(i)
        self.neighbours = tuple(tuple(sorted(s)) for s in nbrs)
        self._actions = (NOOP,) + tuple(range(config.n))

    def actions(self, state):
        return self._actions

    def running(self, state) -> int:
        return bin(state).count("1")

    def p_up(self, state, action, i) -> float:
        c = self.config
        if action == i:
            return c.p_reboot
        if not state >> i & 1:
            return 0.0
        down = sum(1 for j in self.neighbours[i] if not state >> j & 1)
        return (1.0 - c.p_fail) * (1.0 - c.p_infect) ** down

    def sample(self, state, action, rng):
        nxt = 0
        for i in range(self.config.n):
            if rng.random() < self.p_up(state, action, i):
                nxt |= 1 << i
        return nxt, self.running(state) * float(self.config.reward_per_running)

    def distribution(self, state, action):
        if not self.has_distributions:
            raise CapabilityError(f"{self.name}: explicit distributions not requested")
        r = self.running(state) * float(self.config.reward_per_running)
        partial = [(0, 1.0)]
        for i in range(self.config.n):
            p = self.p_up(state, action, i)
            grown = []
            for mask, q in partial:
                if p > 0.0:
                    grown.append((mask | 1 << i, q * p))
                if p < 1.0:
                    grown.append((mask, q * (1.0 - p)))
            partial = grown
        outs = [Outcome(mask, q, r) for mask, q in partial if q > 0.0]
        outs.sort(key=lambda o: o.state)
        return outs


def build_sysadmin(config: SysAdminConfig) -> SysAdminMdp:
    return SysAdminMdp(config)
