"""Array form of an enumerable MDP, consumed by the compiled planners."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Tuple

import numpy as np

from mcplan.mdp import GenerativeMdp, reachable_states


@dataclass(frozen=True)
class TabularMdp:
    """Integer-indexed copy of an MDP's reachable part.

    Outcomes of ``(s, a)`` occupy ``cdf/nxt/rew[out_start[s, a]:out_end[s, a]]``,
    ``cdf`` holding cumulative probabilities (last entry forced to 1).
    """

    mdp: GenerativeMdp = field(repr=False)
    states: List[Hashable] = field(repr=False)
    index: Dict[Hashable, int] = field(repr=False)
    actions: List[Tuple[Hashable, ...]] = field(repr=False)
    n_actions: np.ndarray = field(repr=False)
    out_start: np.ndarray = field(repr=False)
    out_end: np.ndarray = field(repr=False)
    cdf: np.ndarray = field(repr=False)
    nxt: np.ndarray = field(repr=False)
    rew: np.ndarray = field(repr=False)

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def max_actions(self) -> int:
        return int(self.n_actions.max())

    def action_index(self, s: int, action) -> int:
        return self.actions[s].index(action)


def compile_mdp(mdp: GenerativeMdp, max_states: int = 500_000) -> TabularMdp:
    """Enumerate every state reachable from the initial state and pack its outcomes."""
    states = reachable_states(mdp, limit=max_states)
    index = {s: i for i, s in enumerate(states)}
    actions = [tuple(mdp.actions(s)) for s in states]
    n_actions = np.array([len(a) for a in actions], dtype=np.int64)
    max_a = int(n_actions.max())
    out_start = np.zeros((len(states), max_a), dtype=np.int64)
    out_end = np.zeros((len(states), max_a), dtype=np.int64)
    cdf: List[float] = []
    nxt: List[int] = []
    rew: List[float] = []
    for si, s in enumerate(states):
        for ai, a in enumerate(actions[si]):
            out_start[si, ai] = len(cdf)
            acc = 0.0
            for o in mdp.distribution(s, a):
                if o.prob <= 0:
                    continue
                acc += o.prob
                cdf.append(acc)
                nxt.append(index[o.state])
                rew.append(o.reward)
            cdf[-1] = 1.0
            out_end[si, ai] = len(cdf)
    return TabularMdp(mdp, states, index, actions, n_actions, out_start, out_end,
                      np.array(cdf, dtype=np.float64), np.array(nxt, dtype=np.int64),
                      np.array(rew, dtype=np.float64))
