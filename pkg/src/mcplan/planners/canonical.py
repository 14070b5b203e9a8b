"""Baselines and canonical-scheme MCTS: Random, MAB-Uniform, UCT, epsilon-greedy."""

from __future__ import annotations

from mcplan.planners.base import Planner
from mcplan.planners.common import epsilon_greedy_select, ucb1_select

AUTO_C_ROLLOUTS = 100


class RandomPlanner(Planner):
    """Uniform action at the root; consumes no budget."""

    kind = "random"

    def plan(self, state=None, budget=0):
        state = self.mdp.initial_state if state is None else state
        self._reset(state)
        return self._uniform(state)


class MabUniformPlanner(Planner):
    """Round-robin root actions, each followed by a uniformly random continuation."""

    kind = "mab_uniform"

    def iterate(self):
        root = self.root
        i = (self.iterations - 1) % len(root.actions)
        s, r = self.mdp.sample(root.state, root.actions[i], self.rng)
        self._update(root, i, r + self._rollout(s, 1))


class UctPlanner(Planner):
    """Canonical MCTS with UCB1 descent.

    Each iteration descends while in the tree, adds the first new
    ``(state, depth)`` met (and selects one action there), finishes with a
    uniform rollout, then backs the reward-to-go up into every traversed
    in-tree pair.
    """

    kind = "uct"

    def _reset(self, state):
        super()._reset(state)
        self._c = self.config.c
        self._ret_lo = float("inf")
        self._ret_hi = float("-inf")

    def exploration_constant(self) -> float:
        if self._c is not None:
            return self._c
        if self._ret_hi < self._ret_lo:
            return 0.0
        return 2.0 * (self._ret_hi - self._ret_lo)

    def select(self, node):
        return ucb1_select(node, self.exploration_constant(), self.rng)

    def iterate(self):
        H = self.horizon
        tree = self.tree
        node = self.root
        s, d = node.state, 0
        path = []
        added = False
        while node is not None:
            a = self.select(node)
            s2, r = self.mdp.sample(s, a, self.rng)
            path.append((node, node.actions.index(a), r))
            s, d = s2, d + 1
            if d == H:
                break
            key = (s, d)
            nxt = tree.get(key)
            if nxt is None and not added:
                nxt = tree.add(key, self.mdp.actions(s), parent=node.key)
                added = True
            node = nxt
        ret = self._rollout(s, d) if d < H else 0.0
        for node, i, r in reversed(path):
            ret += r
            self._update(node, i, ret)
        if self.config.c is None and self.iterations <= AUTO_C_ROLLOUTS:
            self._ret_lo = min(self._ret_lo, ret)
            self._ret_hi = max(self._ret_hi, ret)


class EpsilonGreedyPlanner(UctPlanner):
    """Canonical MCTS like :class:`UctPlanner` with epsilon-greedy descent."""

    kind = "egreedy"

    def select(self, node):
        return epsilon_greedy_select(node, self.config.epsilon, self.rng)
