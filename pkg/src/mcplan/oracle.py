"""Exact finite-horizon solvers used as ground truth.

All tables are restricted to the ``(state, steps-to-go)`` pairs reachable
from ``(s0, H)``; ``h`` always counts steps to go, so a state found at
depth ``d`` is stored under ``h = H - d``.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Dict, Hashable, Iterator, List, Optional, Sequence, TextIO, Tuple

import numpy as np

from mcplan.errors import CapabilityError, UncoveredQuery
from mcplan.mdp import GenerativeMdp, reachable_levels

MAX_POLICIES = 10**6


@dataclass(frozen=True)
class ValueTables:
    """``v[(s, h)] = V*_h(s)`` and ``q[(s, h, a)] = Q*_h(s, a)``."""

    v: Dict[Tuple[Hashable, int], float]
    q: Dict[Tuple[Hashable, int, Hashable], float]
    horizon: int
    actions: Dict[Hashable, Tuple[Hashable, ...]] = field(repr=False)

    def value(self, state, h: int) -> float:
        try:
            return self.v[(state, h)]
        except KeyError:
            raise UncoveredQuery((state, h)) from None

    def q_value(self, state, h: int, action) -> float:
        try:
            return self.q[(state, h, action)]
        except KeyError:
            raise UncoveredQuery((state, h, action)) from None

    def q_values(self, state, h: int) -> Dict[Hashable, float]:
        return {a: self.q_value(state, h, a) for a in self.actions[state]}

    def optimal_actions(self, state, h: int, tol: float = 1e-9) -> List[Hashable]:
        qs = self.q_values(state, h)
        best = max(qs.values())
        return [a for a, v in qs.items() if v >= best - tol]


@dataclass(frozen=True)
class UniformValueTables:
    """``v[(s, h)]``: expected return of a uniformly drawn depth-indexed policy."""

    v: Dict[Tuple[Hashable, int], float]
    horizon: int

    def value(self, state, h: int) -> float:
        try:
            return self.v[(state, h)]
        except KeyError:
            raise UncoveredQuery((state, h)) from None


def _backward(mdp: GenerativeMdp, H: int, start, combine):
    levels = reachable_levels(mdp, H, start)
    v: Dict[Tuple[Hashable, int], float] = {}
    q: Dict[Tuple[Hashable, int, Hashable], float] = {}
    acts: Dict[Hashable, Tuple[Hashable, ...]] = {}
    for s in levels[H]:
        v[(s, 0)] = 0.0
    for d in range(H - 1, -1, -1):
        h = H - d
        for s in levels[d]:
            if (s, h) in v:
                continue
            actions = mdp.actions(s)
            acts[s] = actions
            qs = []
            for a in actions:
                total = 0.0
                for o in mdp.distribution(s, a):
                    if o.prob > 0:
                        total += o.prob * (o.reward + v[(o.state, h - 1)])
                q[(s, h, a)] = total
                qs.append(total)
            v[(s, h)] = combine(qs)
    for s in levels[H]:
        acts.setdefault(s, mdp.actions(s))
    return v, q, acts


def _require_explicit(mdp: GenerativeMdp) -> None:
    if not mdp.has_distributions:
        raise CapabilityError(f"{mdp.name} has no explicit distributions; exact solvers need them")


def value_iteration(mdp: GenerativeMdp, H: Optional[int] = None, start=None) -> ValueTables:
    """Backward induction on steps-to-go over the reachable cone of ``(start, H)``."""
    _require_explicit(mdp)
    H = mdp.horizon if H is None else H
    v, q, acts = _backward(mdp, H, start, max)
    return ValueTables(v, q, H, acts)


def uniform_policy_value(mdp: GenerativeMdp, H: Optional[int] = None, start=None) -> UniformValueTables:
    """Same recursion as :func:`value_iteration` with the action average in place of the max."""
    _require_explicit(mdp)
    H = mdp.horizon if H is None else H
    v, _, _ = _backward(mdp, H, start, lambda qs: sum(qs) / len(qs))
    return UniformValueTables(v, H)


def simple_regret(tables: ValueTables, s0, H: int, action) -> float:
    """``V*_H(s0) - Q*_H(s0, action)``: loss of taking ``action`` then acting optimally."""
    return tables.value(s0, H) - tables.q_value(s0, H, action)


def uniform_recommendation_regret(tables: ValueTables, s0, H: int) -> float:
    """Expected simple regret of an action drawn uniformly from ``A(s0)``."""
    acts = tables.actions[s0]
    return sum(simple_regret(tables, s0, H, a) for a in acts) / len(acts)


class PolicyEnumeration(Sequence):
    """All deterministic depth-indexed policies on a reachable cone, with exact values.

    Policy ``i`` assigns ``actions[i, k]`` (an index into ``A(state_k)``) to
    cone node ``nodes[k] = (state_k, depth_k)``. Indexing yields
    ``(policy_dict, value)`` pairs.
    """

    def __init__(self, nodes, node_actions, choices: np.ndarray, values: np.ndarray):
        self.nodes = nodes
        self.node_actions = node_actions
        self.choices = choices
        self.values = values

    def __len__(self) -> int:
        return len(self.values)

    def policy(self, i: int) -> Dict[Tuple[Hashable, int], Hashable]:
        row = self.choices[i]
        return {node: acts[row[k]] for k, (node, acts) in enumerate(zip(self.nodes, self.node_actions))}

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        return self.policy(i), float(self.values[i])

    def __iter__(self) -> Iterator[Tuple[Dict, float]]:
        for i in range(len(self)):
            yield self[i]


def enumerate_policies(mdp: GenerativeMdp, H: Optional[int] = None, start=None,
                       max_policies: int = MAX_POLICIES) -> PolicyEnumeration:
    """Brute force: every depth-indexed policy on the reachable cone, exactly evaluated.

    Values are computed for all policies at once, one numpy array per cone
    node, sweeping depths bottom-up. Independent of :func:`value_iteration`:
    no max/mean is taken anywhere.
    """
    _require_explicit(mdp)
    H = mdp.horizon if H is None else H
    levels = reachable_levels(mdp, H, start)
    nodes = [(s, d) for d in range(H) for s in levels[d]]
    node_actions = [mdp.actions(s) for s, _ in nodes]
    count = 1
    for acts in node_actions:
        count *= len(acts)
        if count > max_policies:
            raise CapabilityError(f"more than {max_policies} policies on the reachable cone")
    idx = np.arange(count, dtype=np.int64)
    choices = np.empty((count, len(nodes)), dtype=np.int16)
    stride = 1
    for k, acts in enumerate(node_actions):
        choices[:, k] = (idx // stride) % len(acts)
        stride *= len(acts)
    index = {node: k for k, node in enumerate(nodes)}
    below: Dict[Hashable, np.ndarray] = {}
    zero = np.zeros(count)
    for d in range(H - 1, -1, -1):
        here: Dict[Hashable, np.ndarray] = {}
        for s in levels[d]:
            k = index[(s, d)]
            value = np.zeros(count)
            for ai, a in enumerate(node_actions[k]):
                qa = np.zeros(count)
                for o in mdp.distribution(s, a):
                    if o.prob > 0:
                        nxt = below.get(o.state, zero) if d + 1 < H else zero
                        qa += o.prob * (o.reward + nxt)
                mask = choices[:, k] == ai
                value[mask] = qa[mask]
            here[s] = value
        below = here
    root = levels[0][0]
    return PolicyEnumeration(nodes, node_actions, choices, below[root])


def export_tables(tables: ValueTables, out: Optional[TextIO] = None) -> str:
    """Flat text dump, one ``state<TAB>h<TAB>action<TAB>Q`` line per entry.

    Lines are ordered by decreasing ``h``, then state (by ``repr``), then the
    model's action order; floats use ``repr`` so dumps are byte-stable.
    """
    buf = io.StringIO()
    keys = sorted({(s, h) for (s, h, _a) in tables.q}, key=lambda k: (-k[1], repr(k[0])))
    for s, h in keys:
        for a in tables.actions[s]:
            buf.write(f"{s!r}\t{h}\t{a!r}\t{tables.q[(s, h, a)]!r}\n")
    text = buf.getvalue()
    if out is not None:
        out.write(text)
    return text
