"""Compiled planners over a :class:`~mcplan.planners.tabular.TabularMdp`.

Same algorithms as the reference planners, with dense ``(depth, state,
action)`` arrays in place of the node dictionary and a splitmix64 stream
in place of :class:`~mcplan.rng.RandomSource`. The random streams differ
from the reference ones, so runs agree in distribution only.

Kernels release the GIL, so independent seeds can run on a thread pool.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numba import njit

from mcplan.errors import ConfigError
from mcplan.planners.common import PlannerConfig, planning_horizon
from mcplan.planners.tabular import TabularMdp
from mcplan.rng import derive_seed

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_FNV = np.uint64(0x100000001B3)
_INV53 = 1.0 / 9007199254740992.0

MODE_UCT = 0
MODE_EGREEDY = 1

KIND_NEW = 0
KIND_OUT = 1
KIND_IN = 2


@njit(cache=True, inline="always")
def _mix(z):
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


@njit(cache=True, inline="always")
def _next(st):
    st[0] += _GOLDEN
    return _mix(st[0])


@njit(cache=True, inline="always")
def _uniform(st):
    return float(_next(st) >> np.uint64(11)) * _INV53


@njit(cache=True, inline="always")
def _below(st, n):
    k = int(_uniform(st) * n)
    return k if k < n else n - 1


@njit(cache=True, inline="always")
def _outcome(s, a, out_start, out_end, cdf, u):
    lo = out_start[s, a]
    hi = out_end[s, a] - 1
    while lo < hi:
        mid = (lo + hi) >> 1
        if cdf[mid] > u:
            hi = mid
        else:
            lo = mid + 1
    return lo


@njit(cache=True, inline="always")
def _policy_action(seed, s, t, na):
    z = _mix(seed ^ _mix(np.uint64(s) * _FNV + np.uint64(t) + _GOLDEN))
    return int(z % np.uint64(na))


@njit(cache=True)
def _greedy(q, cnt, d, s, na, st):
    # argmax over visited actions, uniform over ties; uniform if none visited
    best = -np.inf
    ties = 0
    choice = -1
    for a in range(na):
        if cnt[d, s, a] == 0:
            continue
        v = q[d, s, a]
        if v > best:
            best = v
            ties = 1
            choice = a
        elif v == best:
            ties += 1
            if _below(st, ties) == 0:
                choice = a
    if choice < 0:
        choice = _below(st, na)
    return choice


@njit(cache=True, nogil=True)
def _rollout(s, d, H, n_actions, out_start, out_end, cdf, nxt, rew, st):
    total = 0.0
    while d < H:
        k = _outcome(s, _below(st, n_actions[s]), out_start, out_end, cdf, _uniform(st))
        total += rew[k]
        s = nxt[k]
        d += 1
    return total


@njit(cache=True, nogil=True)
def mab_kernel(s0, H, iters, n_actions, out_start, out_end, cdf, nxt, rew, q, cnt, st):
    na = n_actions[s0]
    for it in range(iters):
        a = it % na
        k = _outcome(s0, a, out_start, out_end, cdf, _uniform(st))
        r = rew[k] + _rollout(nxt[k], 1, H, n_actions, out_start, out_end, cdf, nxt, rew, st)
        cnt[0, s0, a] += 1
        q[0, s0, a] += (r - q[0, s0, a]) / cnt[0, s0, a]


@njit(cache=True, nogil=True)
def canonical_kernel(s0, H, iters, mode, c_fixed, epsilon, n_actions, out_start, out_end, cdf, nxt, rew,
                     q, cnt, ntot, in_tree, st):
    """UCT (mode 0) or epsilon-greedy (mode 1) canonical MCTS.

    ``c_fixed <= 0`` selects the automatic constant: twice the return range
    over the first 100 rollouts.
    """
    path_s = np.empty(H, np.int64)
    path_a = np.empty(H, np.int64)
    path_r = np.empty(H, np.float64)
    lo = np.inf
    hi = -np.inf
    in_tree[0, s0] = True
    for it in range(1, iters + 1):
        s = s0
        d = 0
        added = False
        while True:
            na = n_actions[s]
            a = -1
            if mode == MODE_UCT:
                for b in range(na):
                    if cnt[d, s, b] == 0:
                        a = b
                        break
                if a < 0:
                    if c_fixed > 0:
                        c = c_fixed
                    elif hi >= lo:
                        c = 2.0 * (hi - lo)
                    else:
                        c = 0.0
                    logn = math.log(ntot[d, s])
                    best = -np.inf
                    ties = 0
                    for b in range(na):
                        u = q[d, s, b] + c * math.sqrt(logn / cnt[d, s, b])
                        if u > best:
                            best = u
                            ties = 1
                            a = b
                        elif u == best:
                            ties += 1
                            if _below(st, ties) == 0:
                                a = b
            else:
                if epsilon > 0 and _uniform(st) < epsilon:
                    a = _below(st, na)
                else:
                    unvisited = 0
                    for b in range(na):
                        if cnt[d, s, b] == 0:
                            unvisited += 1
                            if unvisited == 1 or _below(st, unvisited) == 0:
                                a = b
                    if a < 0:
                        a = _greedy(q, cnt, d, s, na, st)
            k = _outcome(s, a, out_start, out_end, cdf, _uniform(st))
            path_s[d] = s
            path_a[d] = a
            path_r[d] = rew[k]
            s = nxt[k]
            d += 1
            if d == H:
                break
            if not in_tree[d, s]:
                if added:
                    break
                in_tree[d, s] = True
                added = True
        L = d
        ret = _rollout(s, d, H, n_actions, out_start, out_end, cdf, nxt, rew, st)
        for i in range(L - 1, -1, -1):
            ret += path_r[i]
            si = path_s[i]
            ai = path_a[i]
            cnt[i, si, ai] += 1
            ntot[i, si] += 1
            q[i, si, ai] += (ret - q[i, si, ai]) / cnt[i, si, ai]
        if c_fixed <= 0 and it <= 100:
            lo = min(lo, ret)
            hi = max(hi, ret)


@njit(cache=True, nogil=True)
def brue_kernel(s0, H, start, iters, incremental, n_actions, out_start, out_end, cdf, nxt, rew,
                q, cnt, ntot, in_tree, st):
    """BRUE probes ``start .. start + iters - 1`` (1-based probe numbers)."""
    path_s = np.empty(H, np.int64)
    path_a = np.empty(H, np.int64)
    path_r = np.empty(H, np.float64)
    in_tree[0, s0] = True
    for it in range(start, start + iters):
        u = H - ((it - 1) % H) - 1
        s = s0
        for d in range(H):
            if incremental and d < u and not in_tree[d, s]:
                u = d
            na = n_actions[s]
            if d <= u:
                a = _below(st, na)
            else:
                a = _greedy(q, cnt, d, s, na, st)
            k = _outcome(s, a, out_start, out_end, cdf, _uniform(st))
            path_s[d] = s
            path_a[d] = a
            path_r[d] = rew[k]
            s = nxt[k]
        ret = 0.0
        for d in range(H - 1, u - 1, -1):
            ret += path_r[d]
        su = path_s[u]
        au = path_a[u]
        in_tree[u, su] = True
        cnt[u, su, au] += 1
        ntot[u, su] += 1
        q[u, su, au] += (ret - q[u, su, au]) / cnt[u, su, au]


@njit(cache=True)
def _convert(d, s, na, variant, head, link, pn, pq, pseed, psum, q, cnt, ntot):
    # psum[d, s] = [m, sum n(q-c), sum n(q-c)^2, sum n var, sum var, c]: pool moments
    # kept incrementally (shifted by the node's first return c) so the test is O(1)
    m = psum[d, s, 0]
    if m == 0:
        return False
    ee = psum[d, s, 1] / m
    ev = psum[d, s, 3] / m
    ve = max(psum[d, s, 2] / m - ee * ee, 0.0)
    noise = psum[d, s, 4] / m
    if variant == 0:
        ok = not ev / m >= ve
    else:
        ok = ve > noise
    if not ok:
        return False
    best = np.full(na, -1, np.int64)
    p = head[d, s]
    while p >= 0:
        a = _policy_action(pseed[p], s, d, na)
        if best[a] < 0 or pq[p] > pq[best[a]]:
            best[a] = p
        p = link[p]
    tot = 0
    for a in range(na):
        if best[a] >= 0:
            q[d, s, a] = pq[best[a]]
            cnt[d, s, a] = pn[best[a]]
            tot += pn[best[a]]
    ntot[d, s] = tot
    return True


@njit(cache=True, inline="always")
def _pool_moments(psum, d, s, n, qv, var, sign):
    c = psum[d, s, 5]
    psum[d, s, 0] += sign * n
    psum[d, s, 1] += sign * n * (qv - c)
    psum[d, s, 2] += sign * n * (qv - c) ** 2
    psum[d, s, 3] += sign * n * var
    psum[d, s, 4] += sign * var


@njit(cache=True, nogil=True)
def brueic_kernel(s0, H, iters, phi, psi, variant, n_actions, out_start, out_end, cdf, nxt, rew,
                  q, cnt, ntot, kind, head, tail, act, act_len, link, pn, pq, pvar, pseed, pactive,
                  psum, ctx, st):
    """BRUE_IC probes; ``ctx = [sigma, retract, n_policies, conversions, retracts]`` persists."""
    path_s = np.empty(H, np.int64)
    path_a = np.empty(H, np.int64)
    path_r = np.empty(H, np.float64)
    kind[0, s0] = KIND_IN
    sigma = ctx[0]
    retract = ctx[1]
    npol = ctx[2]
    for _ in range(iters):
        if retract or sigma == H:
            sigma = 0
        else:
            sigma += 1
        retract = 0
        s = s0
        d = 0
        leaf = 0.0
        while d < H:
            kd = kind[d, s]
            if kd == KIND_NEW:
                kind[d, s] = KIND_OUT
                kd = KIND_OUT
            if kd == KIND_OUT and head[d, s] >= 0:
                if _convert(d, s, n_actions[s], variant, head, link, pn, pq, pseed, psum, q, cnt, ntot):
                    kind[d, s] = KIND_IN
                    act_len[d, s] = 0
                    kd = KIND_IN
                    ctx[3] += 1
            if kd == KIND_OUT:
                if d <= sigma:
                    sigma = -1
                    retract = 1
                    ctx[4] += 1
                # value the candidate with one pool policy
                if act_len[d, s] < phi:
                    p = npol
                    npol += 1
                    pseed[p] = _next(st)
                    pn[p] = 0
                    pq[p] = 0.0
                    pvar[p] = 0.0
                    pactive[p] = True
                    link[p] = -1
                    if head[d, s] < 0:
                        head[d, s] = p
                    else:
                        link[tail[d, s]] = p
                    tail[d, s] = p
                    act[d, s, act_len[d, s]] = p
                    act_len[d, s] += 1
                else:
                    p = act[d, s, _below(st, act_len[d, s])]
                r = 0.0
                s2 = s
                for t in range(d, H):
                    a = _policy_action(pseed[p], s2, t, n_actions[s2])
                    k = _outcome(s2, a, out_start, out_end, cdf, _uniform(st))
                    r += rew[k]
                    s2 = nxt[k]
                if head[d, s] == p and pn[p] == 0:
                    psum[d, s, 5] = r
                _pool_moments(psum, d, s, pn[p], pq[p], pvar[p], -1.0)
                pn[p] += 1
                delta = r - pq[p]
                pq[p] += delta / pn[p]
                if pn[p] > 1:
                    pvar[p] = (pvar[p] * (pn[p] - 2) + delta * (r - pq[p])) / (pn[p] - 1)
                _pool_moments(psum, d, s, pn[p], pq[p], pvar[p], 1.0)
                if pn[p] >= 2 and pvar[p] / pn[p] < psi:
                    pactive[p] = False
                    n_act = act_len[d, s]
                    for j in range(n_act):
                        if act[d, s, j] == p:
                            act[d, s, j] = act[d, s, n_act - 1]
                            break
                    act_len[d, s] = n_act - 1
                leaf = r
                break
            na = n_actions[s]
            if d <= sigma:
                a = _below(st, na)
            else:
                a = _greedy(q, cnt, d, s, na, st)
            k = _outcome(s, a, out_start, out_end, cdf, _uniform(st))
            path_s[d] = s
            path_a[d] = a
            path_r[d] = rew[k]
            s = nxt[k]
            d += 1
        ret = leaf
        for i in range(d - 1, -1, -1):
            ret += path_r[i]
            if i == sigma:
                si = path_s[i]
                ai = path_a[i]
                cnt[i, si, ai] += 1
                ntot[i, si] += 1
                q[i, si, ai] += (ret - q[i, si, ai]) / cnt[i, si, ai]
    ctx[0] = sigma
    ctx[1] = retract
    ctx[2] = npol


@dataclass
class SearchArrays:
    """Dense search statistics left behind by one :meth:`FastPlanner.plan` call."""

    q: np.ndarray
    cnt: np.ndarray
    ntot: np.ndarray
    kind: Optional[np.ndarray] = None  # BRUE_IC: KIND_NEW / KIND_OUT / KIND_IN per (depth, state)
    in_tree: Optional[np.ndarray] = None
    conversions: int = 0
    retracts: int = 0
    policies: int = 0

    def root_values(self, s0: int, na: int):
        return self.q[0, s0, :na].copy(), self.cnt[0, s0, :na].copy()


class FastPlanner:
    """Iteration-budgeted planner running one of the compiled kernels.

    ``plan(state, budget, seed)`` returns the recommended action (a domain
    action, not an index) and leaves its statistics in ``self.search``.
    """

    def __init__(self, tab: TabularMdp, config: PlannerConfig, horizon: Optional[int] = None):
        self.tab = tab
        self.config = config
        self.horizon = planning_horizon(tab.mdp, horizon)
        self.psi = config.retirement_threshold() if config.kind == "brue_ic" else 0.0
        self.search: Optional[SearchArrays] = None

    def plan(self, state=None, budget: int = 0, seed: int = 0):
        tab = self.tab
        cfg = self.config
        H = self.horizon
        s0 = tab.index[tab.mdp.initial_state if state is None else state]
        na0 = int(tab.n_actions[s0])
        st = np.array([derive_seed(seed, "fast:" + cfg.kind)], dtype=np.uint64)
        budget = int(budget)
        if budget < 0:
            raise ConfigError("iteration budget must be >= 0")
        if cfg.kind == "random":
            self.search = None
            return tab.actions[s0][_below(st, na0)]

        shape = (H, tab.n_states, tab.max_actions) if cfg.kind != "mab_uniform" else (1, tab.n_states, tab.max_actions)
        q = np.zeros(shape, np.float64)
        cnt = np.zeros(shape, np.int64)
        ntot = np.zeros(shape[:2], np.int64)
        arrays = (tab.n_actions, tab.out_start, tab.out_end, tab.cdf, tab.nxt, tab.rew)
        search = SearchArrays(q, cnt, ntot)
        if cfg.kind == "mab_uniform":
            mab_kernel(s0, H, budget, *arrays, q, cnt, st)
        elif cfg.kind in ("uct", "egreedy"):
            in_tree = np.zeros(shape[:2], np.bool_)
            mode = MODE_UCT if cfg.kind == "uct" else MODE_EGREEDY
            c = -1.0 if cfg.c is None else float(cfg.c)
            canonical_kernel(s0, H, budget, mode, c, float(cfg.epsilon), *arrays, q, cnt, ntot, in_tree, st)
            search.in_tree = in_tree
        elif cfg.kind in ("brue", "brue_i"):
            in_tree = np.zeros(shape[:2], np.bool_)
            brue_kernel(s0, H, 1, budget, cfg.kind == "brue_i", *arrays, q, cnt, ntot, in_tree, st)
            search.in_tree = in_tree
        else:
            cap = budget + 1
            kind = np.zeros(shape[:2], np.int8)
            head = np.full(shape[:2], -1, np.int64)
            tail = np.full(shape[:2], -1, np.int64)
            act = np.zeros(shape[:2] + (cfg.phi,), np.int64)
            act_len = np.zeros(shape[:2], np.int64)
            link = np.full(cap, -1, np.int64)
            pn = np.zeros(cap, np.int64)
            pq = np.zeros(cap, np.float64)
            pvar = np.zeros(cap, np.float64)
            pseed = np.zeros(cap, np.uint64)
            pactive = np.zeros(cap, np.bool_)
            psum = np.zeros(shape[:2] + (6,), np.float64)
            ctx = np.zeros(5, np.int64)
            variant = 0 if cfg.conversion == "figure5" else 1
            brueic_kernel(s0, H, budget, cfg.phi, self.psi, variant, *arrays, q, cnt, ntot, kind, head, tail,
                          act, act_len, link, pn, pq, pvar, pseed, pactive, psum, ctx, st)
            search.kind = kind
            search.in_tree = kind == KIND_IN
            search.conversions = int(ctx[3])
            search.retracts = int(ctx[4])
            search.policies = int(ctx[2])
        self.search = search
        a = _greedy(q, cnt, 0, s0, na0, st)
        return tab.actions[s0][a]


def fast_plan(tab: TabularMdp, config: PlannerConfig, budget: int, seed: int, state=None, horizon=None):
    return FastPlanner(tab, config, horizon).plan(state, budget, seed)
