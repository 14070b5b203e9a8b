"""Generative finite-horizon MDPs, lazily materialized random policies.

A model is anything implementing :class:`GenerativeMdp`: an initial state,
a horizon, ordered applicable actions per state and a transition sampler.
Models that can also enumerate ``(successor, probability, reward)``
triples set ``has_distributions`` and override :meth:`distribution`; the
exact solvers in :mod:`mcplan.oracle` need that.
"""

from __future__ import annotations

import abc
import bisect
import hashlib
from collections import deque
from typing import Callable, Dict, Hashable, Iterable, List, Mapping, NamedTuple, Optional, Tuple

from mcplan.errors import CapabilityError, ConfigError, ContractViolation
from mcplan.rng import RandomSource

State = Hashable
Action = Hashable


class Outcome(NamedTuple):
    state: State
    prob: float
    reward: float


class GenerativeMdp(abc.ABC):
    """Finite-horizon, undiscounted MDP accessed through sampled transitions."""

    name: str = "mdp"
    has_distributions: bool = False

    def __init__(self, initial_state: State, horizon: int):
        if int(horizon) < 1:
            raise ConfigError(f"horizon must be >= 1, got {horizon}")
        self.initial_state = initial_state
        self.horizon = int(horizon)

    @abc.abstractmethod
    def actions(self, state: State) -> Tuple[Action, ...]:
        """Non-empty tuple of applicable actions, identically ordered per call."""

    @abc.abstractmethod
    def sample(self, state: State, action: Action, rng: RandomSource) -> Tuple[State, float]:
        """Draw ``(successor, reward)``. Callers guarantee ``action in actions(state)``."""

    def distribution(self, state: State, action: Action) -> List[Outcome]:
        raise CapabilityError(f"{self.name} provides sampled transitions only")

    def is_absorbing(self, state: State) -> bool:
        """True for states that no action leaves and that pay nothing further.

        Only a hint for reporting; planners never rely on it.
        """
        return False


class TableMdp(GenerativeMdp):
    """Explicitly tabulated MDP: ``transitions[(s, a)]`` lists ``(s', p, r)``.

    Sampling inverts the cumulative distribution of the listed outcomes.
    Mostly used for small fixtures and hand-made examples.
    """

    has_distributions = True

    def __init__(self, transitions: Mapping[Tuple[State, Action], Iterable[Tuple[State, float, float]]],
                 initial_state: State, horizon: int, name: str = "table"):
        super().__init__(initial_state, horizon)
        self.name = name
        acts: Dict[State, List[Action]] = {}
        self._dist: Dict[Tuple[State, Action], List[Outcome]] = {}
        self._cdf: Dict[Tuple[State, Action], List[float]] = {}
        for (s, a), outs in transitions.items():
            outs = [Outcome(o[0], float(o[1]), float(o[2])) for o in outs]
            if not outs:
                raise ConfigError(f"empty distribution at {(s, a)!r}")
            if any(o.prob < 0 for o in outs):
                raise ConfigError(f"negative probability at {(s, a)!r}")
            total = sum(o.prob for o in outs)
            if abs(total - 1.0) > 1e-12:
                raise ConfigError(f"probabilities at {(s, a)!r} sum to {total!r}")
            self._dist[(s, a)] = outs
            cdf, acc = [], 0.0
            for o in outs:
                acc += o.prob
                cdf.append(acc)
            cdf[-1] = 1.0
            self._cdf[(s, a)] = cdf
            acts.setdefault(s, []).append(a)
        self._actions = {s: tuple(v) for s, v in acts.items()}
        for outs in self._dist.values():
            for o in outs:
                if o.state not in self._actions:
                    raise ConfigError(f"state {o.state!r} has no applicable actions")
        if initial_state not in self._actions:
            raise ConfigError(f"initial state {initial_state!r} has no applicable actions")

    def actions(self, state):
        return self._actions[state]

    def sample(self, state, action, rng):
        key = (state, action)
        k = bisect.bisect_right(self._cdf[key], rng.random())
        outs = self._dist[key]
        o = outs[min(k, len(outs) - 1)]
        return o.state, o.reward

    def distribution(self, state, action):
        return list(self._dist[(state, action)])

    @property
    def states(self) -> Tuple[State, ...]:
        return tuple(self._actions)


def sample_transition(mdp: GenerativeMdp, state: State, action: Action, rng: RandomSource) -> Tuple[State, float]:
    """Checked transition draw: raises :class:`ContractViolation` for an inapplicable action."""
    if action not in mdp.actions(state):
        raise ContractViolation(f"action {action!r} not applicable in {state!r}")
    return mdp.sample(state, action, rng)


def _policy_hash(seed: int, state: State, depth: int) -> int:
    h = hashlib.blake2b(repr((state, depth)).encode(), digest_size=8,
                        key=(seed & ((1 << 64) - 1)).to_bytes(8, "little"))
    return int.from_bytes(h.digest(), "little")


class LazyPolicy:
    """Deterministic depth-indexed policy drawn uniformly on first query.

    The action at ``(state, depth)`` is ``A(state)[hash(seed, state, depth) % |A(state)|]``
    and is memoized, so a policy is fully described by its seed.
    """

    __slots__ = ("seed", "mdp", "memo")

    def __init__(self, mdp: GenerativeMdp, seed: int):
        self.mdp = mdp
        self.seed = int(seed)
        self.memo: Dict[Tuple[State, int], Action] = {}

    def action(self, state: State, depth: int) -> Action:
        key = (state, depth)
        try:
            return self.memo[key]
        except KeyError:
            acts = self.mdp.actions(state)
            a = self.memo[key] = acts[_policy_hash(self.seed, state, depth) % len(acts)]
            return a

    __call__ = action

    def __repr__(self) -> str:
        return f"LazyPolicy(seed={self.seed:#x}, queried={len(self.memo)})"


def generate_random_policy(mdp: GenerativeMdp, seed: int) -> LazyPolicy:
    return LazyPolicy(mdp, seed)


def execute_policy(mdp: GenerativeMdp, policy: Callable[[State, int], Action], state: State, depth: int,
                   rng: RandomSource, horizon: Optional[int] = None,
                   on_step: Optional[Callable[[State, int, Action, float], None]] = None) -> float:
    """Run ``policy`` from ``(state, depth)`` to the horizon and return the reward sum.

    ``on_step(state, depth, action, reward)`` is called after every step when given.
    """
    H = mdp.horizon if horizon is None else horizon
    if not 0 <= depth <= H:
        raise ContractViolation(f"depth {depth} outside [0, {H}]")
    total = 0.0
    s = state
    for t in range(depth, H):
        a = policy(s, t)
        s2, r = mdp.sample(s, a, rng)
        if on_step is not None:
            on_step(s, t, a, r)
        total += r
        s = s2
    return total


def reachable_states(mdp: GenerativeMdp, start: Optional[State] = None, limit: Optional[int] = None) -> List[State]:
    """Breadth-first closure of states reachable from ``start`` under any action.

    Requires explicit distributions. Order is discovery order, which is
    deterministic because actions and outcomes are ordered.
    """
    if not mdp.has_distributions:
        raise CapabilityError(f"{mdp.name} has no explicit distributions")
    s0 = mdp.initial_state if start is None else start
    seen = {s0}
    order = [s0]
    queue = deque([s0])
    while queue:
        s = queue.popleft()
        for a in mdp.actions(s):
            for o in mdp.distribution(s, a):
                if o.prob > 0 and o.state not in seen:
                    seen.add(o.state)
                    order.append(o.state)
                    queue.append(o.state)
                    if limit is not None and len(order) > limit:
                        raise CapabilityError(f"more than {limit} reachable states")
    return order


def reachable_levels(mdp: GenerativeMdp, horizon: Optional[int] = None,
                     start: Optional[State] = None) -> List[List[State]]:
    """States reachable at each depth ``0..H`` (exactly ``d`` steps from ``start``)."""
    if not mdp.has_distributions:
        raise CapabilityError(f"{mdp.name} has no explicit distributions")
    H = mdp.horizon if horizon is None else horizon
    s0 = mdp.initial_state if start is None else start
    levels = [[s0]]
    for _ in range(H):
        seen: Dict[State, None] = {}
        for s in levels[-1]:
            for a in mdp.actions(s):
                for o in mdp.distribution(s, a):
                    if o.prob > 0:
                        seen.setdefault(o.state, None)
        levels.append(list(seen))
    return levels
