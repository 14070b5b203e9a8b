"""MCTS with separated exploration and estimation phases; BRUE and BRUE_I.

A probe walks from the root to the horizon (or to a leaf, for BRUE_IC).
Actions are drawn by the exploration policy (uniform) at every depth up to
and including the probe's *update depth* ``u``, and by the estimation
policy (greedy) below it. On the way back, only the pair ``(s_u, a_{u+1})``
is updated, with the reward-to-go from ``s_u``.

BRUE's round-robin switching value ``sigma`` in ``1..H`` names the first
greedy step, so its update depth is ``sigma - 1``: the updated action is
always exploratory and the switch cycles through depths ``H-1, ..., 0``.
"""

from __future__ import annotations

from mcplan.planners.base import Planner
from mcplan.planners.common import ProbeContext, ProbeRecord, argmax_visited


def brue_switch(n: int, H: int) -> int:
    """Round robin over ``1..H``, starting at ``H``: ``H - ((n - 1) mod H)``."""
    return H - ((n - 1) % H)


class Mcts2ePlanner(Planner):
    """Probe recursion shared by BRUE, BRUE_I and BRUE_IC.

    Subclasses provide :meth:`switch`, :meth:`end_of_probe`,
    :meth:`evaluate` and :meth:`update_node`; exploration is uniform and
    estimation is greedy over visited actions for all of them.
    """

    def _reset(self, state):
        super()._reset(state)
        self.ctx = ProbeContext()
        self._trail = [None] * (self.horizon + 1)
        self._updated = None
        self._conversions = []

    def iterate(self):
        ctx = self.ctx
        ctx.n = self.iterations
        self.switch()
        sigma = ctx.sigma
        self._updated = None
        self._conversions = []
        self.probe(self.root.state, 0)
        if self.audit:
            self.trace.append(ProbeRecord(ctx.n, sigma, ctx.retract, self._updated, tuple(self._conversions)))

    def switch(self) -> None:
        raise NotImplementedError

    def probe(self, s, d: int) -> float:
        self._trail[d] = s
        if self.end_of_probe(s, d):
            return self.evaluate(s, d)
        if d <= self.ctx.update_depth:
            a = self.exploration(s, d)
        else:
            a = self.estimation(s, d)
        s2, r = self.mdp.sample(s, a, self.rng)
        r += self.probe(s2, d + 1)
        if d == self.ctx.update_depth:
            self.update_node(s, d, a, r)
        return r

    def end_of_probe(self, s, d: int) -> bool:
        return d == self.horizon

    def evaluate(self, s, d: int) -> float:
        return 0.0

    def exploration(self, s, d: int):
        return self._uniform(s)

    def estimation(self, s, d: int):
        node = self.tree.get((s, d))
        if node is not None:
            i = argmax_visited(node, self.rng)
            if i is not None:
                return node.actions[i]
        return self._uniform(s)

    def update_node(self, s, d: int, a, r: float) -> None:
        key = (s, d)
        node = self.tree.get(key)
        if node is None:
            parent = (self._trail[d - 1], d - 1) if d > 0 else None
            node = self.tree.add(key, self.mdp.actions(s), parent=parent)
        self._update(node, node.actions.index(a), r)
        self._updated = (key, a)


class BruePlanner(Mcts2ePlanner):
    """BRUE: exactly one pair updated per probe, at a round-robin depth."""

    kind = "brue"

    def switch(self):
        self.ctx.sigma = brue_switch(self.ctx.n, self.horizon)
        self.ctx.update_depth = self.ctx.sigma - 1


class BrueIPlanner(BruePlanner):
    """BRUE with incremental expansion.

    The update moves up to the shallowest ``(state, depth)`` on the
    exploratory part of the probe that is not yet in the tree; the probe
    turns greedy right after it. When every node down to the update depth
    is already in the tree, the update stays where BRUE would put it. The
    tree therefore grows as one region connected to the root.
    """

    kind = "brue_i"

    def end_of_probe(self, s, d):
        if d == self.horizon:
            return True
        if d < self.ctx.update_depth and (s, d) not in self.tree:
            self.ctx.update_depth = d
        return False
