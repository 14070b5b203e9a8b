"""BRUE_IC: BRUE with incremental and selective type conversion.

New ``(state, depth)`` pairs enter the tree as candidates (``T_OUT``).
A candidate ends every probe that reaches it and is valued by executing a
lazily drawn random policy from its pool. It becomes an ordinary ``T_IN``
node only once the spread of its policies' mean returns beats their
within-policy noise (see :func:`conversion_statistics`).

``ctx.sigma`` here is the update depth itself, in ``0..H``; it climbs by
one per probe and falls back to 0 after a probe stopped at a candidate
at or above it (a *retract*), or after reaching ``H``.
"""

from __future__ import annotations

from typing import List, NamedTuple, Sequence

from mcplan.errors import ContractViolation
from mcplan.mdp import LazyPolicy, execute_policy
from mcplan.planners.common import T_IN, T_OUT, PolicyStats, ProbeContext, SearchNode, brueic_update_policy
from mcplan.planners.mcts2e import Mcts2ePlanner


class ConversionStats(NamedTuple):
    m: int
    ee: float
    ev: float
    ve: float
    noise: float  # sum_pi (n/m) * Var/n, the per-policy form of the right-hand side


def conversion_statistics(policies: Sequence[PolicyStats]) -> ConversionStats:
    """Sample-weighted moments over a candidate's whole pool (retired policies included).

    ``ee``: mean of policy means; ``ev``: mean of policy variances; ``ve``:
    variance of policy means; all weighted by ``n(pi) / m``.
    """
    m = sum(p.n for p in policies)
    if m == 0:
        raise ContractViolation("conversion test needs at least one sampled policy")
    ee = sum(p.n / m * p.q for p in policies)
    ev = sum(p.n / m * p.var for p in policies)
    ve = sum(p.n / m * (p.q - ee) ** 2 for p in policies)
    noise = sum(p.n / m * (p.var / p.n) for p in policies if p.n > 0)
    return ConversionStats(m, ee, ev, ve, noise)


def conversion_passes(stats: ConversionStats, variant: str = "figure5") -> bool:
    """``figure5``: convert unless ``EV/m >= VE``; ``eq3``: convert iff ``VE > noise``."""
    if variant == "figure5":
        return not stats.ev / stats.m >= stats.ve
    if variant == "eq3":
        return stats.ve > stats.noise
    raise ValueError(f"unknown conversion variant {variant!r}")


def brueic_convert(node: SearchNode, variant: str = "figure5") -> bool:
    """Try to turn a candidate into a ``T_IN`` node; True if it converted.

    On conversion each action inherits ``(Q, n)`` from the best-valued pool
    policy whose first move (at the node's own state and depth) is that
    action; actions no policy starts with stay unvisited.
    """
    if node.kind != T_OUT or not node.policies:
        raise ContractViolation(f"{node.key!r} is not a candidate with a policy pool")
    stats = conversion_statistics(node.policies)
    if not conversion_passes(stats, variant):
        return False
    s, d = node.key
    best: List = [None] * len(node.actions)
    for p in node.policies:
        i = node.actions.index(p.policy(s, d))
        if best[i] is None or p.q > best[i].q:
            best[i] = p
    for i, p in enumerate(best):
        if p is not None:
            node.stats[i].q = p.q
            node.stats[i].n = p.n
    node.n = sum(st.n for st in node.stats)
    node.kind = T_IN
    node.active = []
    return True


def brueic_switch(ctx: ProbeContext, H: int) -> int:
    if ctx.retract or ctx.sigma == H:
        ctx.sigma = 0
    else:
        ctx.sigma += 1
    ctx.retract = False
    ctx.update_depth = ctx.sigma
    return ctx.sigma


def brueic_end_of_probe(planner: "BrueIcPlanner", s, d: int) -> bool:
    """Decide whether the probe stops at ``(s, d)``, inserting it as a candidate if new."""
    ctx = planner.ctx
    if d == planner.horizon:
        return True
    key = (s, d)
    node = planner.tree.get(key)
    if node is None:
        parent = (planner._trail[d - 1], d - 1) if d > 0 else None
        node = planner.tree.add(key, planner.mdp.actions(s), kind=T_OUT, parent=parent)
    if node.n > 0 or node.kind == T_IN:
        return False
    if node.policies and brueic_convert(node, planner.config.conversion):
        planner._conversions.append(key)
        return False
    if d <= ctx.sigma:
        ctx.sigma = -1
        ctx.update_depth = -1
        ctx.retract = True
    planner._leaf = node
    return True


def brueic_evaluate(planner: "BrueIcPlanner", node: SearchNode, d: int) -> float:
    """Value a candidate with one run of a pool policy and update that policy's statistics."""
    cfg = planner.config
    if len(node.active) < cfg.phi:
        ps = PolicyStats(LazyPolicy(planner.mdp, planner.rng.bits64()))
        node.policies.append(ps)
        node.active.append(ps)
    else:
        ps = node.active[planner.rng.randbelow(len(node.active))]
    r = execute_policy(planner.mdp, ps.policy, node.state, d, planner.rng, horizon=planner.horizon)
    brueic_update_policy(ps, r)
    # variance is undefined from a single sample; retire only from n >= 2
    if ps.n >= 2 and ps.var / ps.n < planner.psi:
        ps.active = False
        node.active.remove(ps)
    return r


class BrueIcPlanner(Mcts2ePlanner):
    kind = "brue_ic"

    def _root_kind(self):
        return T_IN

    def _reset(self, state):
        super()._reset(state)
        self.psi = self.config.retirement_threshold()
        self._leaf = None

    def switch(self):
        brueic_switch(self.ctx, self.horizon)

    def end_of_probe(self, s, d):
        return brueic_end_of_probe(self, s, d)

    def evaluate(self, s, d):
        if d == self.horizon:
            return 0.0
        return brueic_evaluate(self, self._leaf, d)

    def update_node(self, s, d, a, r):
        node = self.tree.get((s, d))
        self._update(node, node.actions.index(a), r)
        self._updated = ((s, d), a)

    def candidates(self) -> List[SearchNode]:
        return [n for n in self.tree if n.kind == T_OUT]
