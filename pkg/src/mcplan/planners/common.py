"""Search-tree records, planner configuration and action-selection rules."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace
from typing import Dict, Hashable, List, NamedTuple, Optional, Sequence, Tuple, Union

from mcplan.errors import ConfigError
from mcplan.mdp import LazyPolicy
from mcplan.rng import RandomSource

KINDS = ("random", "mab_uniform", "egreedy", "uct", "brue", "brue_i", "brue_ic")

T_IN = "in"
T_OUT = "out"

NodeKey = Tuple[Hashable, int]


class ActionStats:
    """Visit count and running-mean value of one ``(node, action)`` pair."""

    __slots__ = ("n", "q")

    def __init__(self, n: int = 0, q: float = 0.0):
        self.n = n
        self.q = q

    @property
    def visited(self) -> bool:
        return self.n > 0

    def update(self, r: float) -> None:
        self.n += 1
        self.q += (r - self.q) / self.n

    def __repr__(self):
        return f"ActionStats(n={self.n}, q={self.q if self.n else 'unvisited'})"


class PolicyStats:
    """Running mean and sample variance of the returns of one candidate policy."""

    __slots__ = ("policy", "n", "q", "var", "active")

    def __init__(self, policy: Optional[LazyPolicy] = None, n: int = 0, q: float = 0.0,
                 var: float = 0.0, active: bool = True):
        self.policy = policy
        self.n = n
        self.q = q
        self.var = var
        self.active = active

    def __repr__(self):
        return f"PolicyStats(n={self.n}, q={self.q!r}, var={self.var!r}, active={self.active})"


def brueic_update_policy(ps: PolicyStats, r: float) -> PolicyStats:
    """Welford-style update of ``(n, Q, Var)`` with one return ``r``.

    ``Var`` is the unbiased sample variance; it is 0 while ``n <= 1``.
    """
    ps.n += 1
    delta = r - ps.q
    ps.q += delta / ps.n
    if ps.n > 1:
        ps.var = (ps.var * (ps.n - 2) + delta * (r - ps.q)) / (ps.n - 1)
    else:
        ps.var = 0.0
    return ps


class SearchNode:
    """One ``(state, depth)`` forecaster of the search DAG.

    ``kind`` is ``T_IN`` for nodes that keep per-action statistics and
    ``T_OUT`` for BRUE_IC candidates still in their evaluation period; only
    candidates carry a policy pool.
    """

    __slots__ = ("key", "actions", "stats", "kind", "n", "policies", "active")

    def __init__(self, key: NodeKey, actions: Sequence[Hashable], kind: str = T_IN):
        self.key = key
        self.actions = tuple(actions)
        self.stats = [ActionStats() for _ in self.actions]
        self.kind = kind
        self.n = 0
        self.policies: Optional[List[PolicyStats]] = [] if kind == T_OUT else None
        self.active: List[PolicyStats] = []

    @property
    def state(self):
        return self.key[0]

    @property
    def depth(self) -> int:
        return self.key[1]

    def stat(self, action) -> ActionStats:
        return self.stats[self.actions.index(action)]

    def update(self, index: int, r: float) -> None:
        self.stats[index].update(r)
        self.n += 1

    def q_values(self) -> Dict[Hashable, Optional[float]]:
        return {a: (st.q if st.n else None) for a, st in zip(self.actions, self.stats)}

    def __repr__(self):
        return f"SearchNode({self.key!r}, kind={self.kind}, n={self.n})"


class SearchTree:
    """Transposition map ``(state, depth) -> SearchNode`` with an insertion audit log."""

    def __init__(self):
        self.nodes: Dict[NodeKey, SearchNode] = {}
        self.log: List[Tuple[NodeKey, Optional[NodeKey]]] = []

    def __contains__(self, key) -> bool:
        return key in self.nodes

    def __len__(self) -> int:
        return len(self.nodes)

    def get(self, key) -> Optional[SearchNode]:
        return self.nodes.get(key)

    def add(self, key: NodeKey, actions, kind: str = T_IN, parent: Optional[NodeKey] = None) -> SearchNode:
        node = SearchNode(key, actions, kind)
        self.nodes[key] = node
        self.log.append((key, parent))
        return node

    def __iter__(self):
        return iter(self.nodes.values())


@dataclass(frozen=True)
class Budget:
    """Iteration count or wall-clock allowance (milliseconds) for one planning call."""

    iterations: Optional[int] = None
    milliseconds: Optional[float] = None

    def __post_init__(self):
        if (self.iterations is None) == (self.milliseconds is None):
            raise ConfigError("budget needs exactly one of iterations / milliseconds")
        if self.iterations is not None and self.iterations < 0:
            raise ConfigError("iteration budget must be >= 0")
        if self.milliseconds is not None and self.milliseconds < 0:
            raise ConfigError("time budget must be >= 0")

    @classmethod
    def of(cls, budget: Union["Budget", int]) -> "Budget":
        return budget if isinstance(budget, Budget) else cls(iterations=int(budget))


class BudgetClock:
    """Answers "may another probe start?" for either kind of budget."""

    __slots__ = ("budget", "used", "deadline")

    def __init__(self, budget: Budget):
        self.budget = budget
        self.used = 0
        self.deadline = (time.perf_counter() + budget.milliseconds / 1000.0
                         if budget.milliseconds is not None else None)

    def next(self) -> bool:
        if self.deadline is None:
            ok = self.used < self.budget.iterations
        else:
            ok = time.perf_counter() < self.deadline
        if ok:
            self.used += 1
        return ok


@dataclass(frozen=True)
class PlannerConfig:
    """Parameters of one planner.

    ``c=None`` makes UCT estimate its exploration constant as twice the
    return range seen over the first 100 rollouts. ``psi=None`` derives the
    retirement threshold from ``reward_range`` as ``1e-4 * reward_range**2``.
    """

    kind: str
    c: Optional[float] = None
    epsilon: float = 0.1
    phi: int = 10
    psi: Optional[float] = None
    reward_range: Optional[float] = None
    conversion: str = "figure5"
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown planner kind {self.kind!r}; expected one of {KINDS}")
        if self.c is not None and not self.c > 0:
            raise ConfigError("UCT exploration constant must be > 0")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ConfigError("epsilon must lie in [0, 1]")
        if self.phi < 1:
            raise ConfigError("phi must be >= 1")
        if self.psi is not None and self.psi < 0:
            raise ConfigError("psi must be >= 0")
        if self.conversion not in ("figure5", "eq3"):
            raise ConfigError("conversion must be 'figure5' or 'eq3'")

    def retirement_threshold(self) -> float:
        if self.psi is not None:
            return self.psi
        if self.reward_range is None:
            raise ConfigError("brue_ic needs psi or reward_range")
        return 1e-4 * self.reward_range ** 2

    def with_(self, **changes) -> "PlannerConfig":
        return replace(self, **changes)


@dataclass
class ProbeContext:
    """Per-probe switching state.

    ``sigma`` is the switching value in the owning planner's own convention
    (BRUE: ``1..H``, BRUE_IC: ``0..H``, ``-1`` after a retract).
    ``update_depth`` is the one depth whose node a probe may update: actions
    are exploratory at depths ``<= update_depth`` and greedy below it.
    """

    sigma: int = 0
    retract: bool = False
    n: int = 0
    update_depth: int = -1


class ProbeRecord(NamedTuple):
    iteration: int
    sigma: int
    retract: bool
    updated: Optional[Tuple[NodeKey, Hashable]]
    conversions: Tuple[NodeKey, ...]

    def line(self) -> str:
        upd = "-" if self.updated is None else f"{self.updated[0]!r}:{self.updated[1]!r}"
        conv = ",".join(repr(k) for k in self.conversions) or "-"
        return f"{self.iteration}\t{self.sigma}\t{int(self.retract)}\t{upd}\t{conv}"


def argmax_visited(node: SearchNode, rng: RandomSource) -> Optional[int]:
    """Index of a uniformly tie-broken argmax over visited actions, or None if none visited."""
    best = -math.inf
    ties: List[int] = []
    for i, st in enumerate(node.stats):
        if st.n == 0:
            continue
        if st.q > best:
            best = st.q
            ties = [i]
        elif st.q == best:
            ties.append(i)
    if not ties:
        return None
    return ties[0] if len(ties) == 1 else ties[rng.randbelow(len(ties))]


def recommend(root: SearchNode, rng: RandomSource):
    """Greedy root action: argmax of Q over visited actions, ties and no-data uniform."""
    i = argmax_visited(root, rng)
    if i is None:
        i = rng.randbelow(len(root.actions))
    return root.actions[i]


def ucb1_select(node: SearchNode, c: float, rng: RandomSource):
    """Unvisited actions first (in order), else argmax of ``Q + c sqrt(ln n / n_a)``."""
    for a, st in zip(node.actions, node.stats):
        if st.n == 0:
            return a
    log_n = math.log(node.n)
    best = -math.inf
    ties: List[int] = []
    for i, st in enumerate(node.stats):
        u = st.q + c * math.sqrt(log_n / st.n)
        if u > best:
            best = u
            ties = [i]
        elif u == best:
            ties.append(i)
    i = ties[0] if len(ties) == 1 else ties[rng.randbelow(len(ties))]
    return node.actions[i]


def epsilon_greedy_select(node: SearchNode, epsilon: float, rng: RandomSource):
    """With probability epsilon uniform; otherwise greedy, trying unvisited actions first."""
    if epsilon > 0 and rng.random() < epsilon:
        return node.actions[rng.randbelow(len(node.actions))]
    unvisited = [i for i, st in enumerate(node.stats) if st.n == 0]
    if unvisited:
        return node.actions[unvisited[rng.randbelow(len(unvisited))] if len(unvisited) > 1 else unvisited[0]]
    return node.actions[argmax_visited(node, rng)]


def planning_horizon(mdp, horizon: Optional[int]) -> int:
    H = mdp.horizon if horizon is None else int(horizon)
    if H < 1:
        raise ConfigError("planning horizon must be >= 1")
    return H
