import collections

import numpy as np
import pytest
from scipy import stats

from mcplan.domains import load_instance
from mcplan.errors import CapabilityError, ConfigError
from mcplan.mdp import reachable_states
from mcplan.planners import PlannerConfig, make_planner
from mcplan.planners.fast import KIND_IN, KIND_OUT, FastPlanner, fast_plan
from mcplan.planners.tabular import compile_mdp
from mcplan.rng import RandomSource

import mdp_fixtures as fx
from test_oracle import INSTANCES

KINDS = ["mab_uniform", "uct", "egreedy", "brue", "brue_i", "brue_ic"]


def config(kind):
    return PlannerConfig(kind, phi=4, psi=0.01)


def test_compile_matches_model():
    mdp = fx.grid_fixture(H=3)
    tab = compile_mdp(mdp)
    assert tab.n_states == 3 and set(tab.states) == {"r", "u", "v"}
    for s in tab.states:
        i = tab.index[s]
        for j, a in enumerate(mdp.actions(s)):
            lo, hi = tab.out_start[i, j], tab.out_end[i, j]
            outs = mdp.distribution(s, a)
            assert hi - lo == len(outs)
            assert tab.cdf[hi - 1] == 1.0
            assert [tab.states[k] for k in tab.nxt[lo:hi]] == [o.state for o in outs]
            assert list(tab.rew[lo:hi]) == [o.reward for o in outs]


def test_compile_sailing_size():
    mdp = load_instance(INSTANCES / "sailing_10x10.ini")
    assert compile_mdp(mdp).n_states == len(reachable_states(mdp)) == 800


def test_compile_limit():
    with pytest.raises(CapabilityError):
        compile_mdp(load_instance(INSTANCES / "sailing_5x5.ini"), max_states=10)


@pytest.mark.parametrize("kind", KINDS + ["random"])
def test_fast_is_deterministic(kind):
    tab = compile_mdp(load_instance(INSTANCES / "sailing_3x3.ini"))
    a = [fast_plan(tab, config(kind), 500, seed) for seed in range(20)]
    b = [fast_plan(tab, config(kind), 500, seed) for seed in range(20)]
    assert a == b


def test_fast_rejects_negative_budget():
    tab = compile_mdp(fx.two_arm())
    with pytest.raises(ConfigError):
        fast_plan(tab, config("brue"), -1, 0)


def test_brue_kernel_one_update_per_probe():
    tab = compile_mdp(load_instance(INSTANCES / "sailing_3x3.ini"))
    for kind in ("brue", "brue_i"):
        fp = FastPlanner(tab, config(kind))
        fp.plan(None, 10_000, 3)
        assert fp.search.cnt.sum() == 10_000
        assert (fp.search.ntot == fp.search.cnt.sum(axis=2)).all()


def test_mab_kernel_round_robin():
    tab = compile_mdp(fx.lottery(H=3, actions=3))
    fp = FastPlanner(tab, config("mab_uniform"))
    fp.plan("s", 31, 0)
    _, n = fp.search.root_values(0, 3)
    assert list(n) == [11, 10, 10]


def test_uct_kernel_root_sees_every_probe():
    tab = compile_mdp(fx.grid_fixture(H=4))
    fp = FastPlanner(tab, config("uct"))
    fp.plan("r", 1234, 0)
    s0 = tab.index["r"]
    assert fp.search.ntot[0, s0] == 1234
    assert fp.search.in_tree.sum() <= 1234 + 1


def test_brueic_kernel_bookkeeping():
    tab = compile_mdp(load_instance(INSTANCES / "sailing_3x3.ini"))
    fp = FastPlanner(tab, config("brue_ic"))
    fp.plan(None, 20_000, 5)
    s = fp.search
    s0 = tab.index[tab.mdp.initial_state]
    # the root is in from the start and is not counted as a conversion
    assert s.kind[0, s0] == KIND_IN
    assert (s.kind == KIND_IN).sum() - 1 == s.conversions
    assert s.retracts > 0 and s.policies > 0
    assert (s.cnt[s.kind == KIND_OUT] == 0).all()


def test_fast_two_arm():
    tab = compile_mdp(fx.two_arm(H=2))
    for kind in KINDS:
        assert all(fast_plan(tab, config(kind), 200, seed) == "a1" for seed in range(30))


def _contingency(kind, mdp, budget, seeds):
    tab = compile_mdp(mdp)
    cfg = config(kind)
    ref = collections.Counter(make_planner(mdp, cfg, RandomSource(i)).plan(None, budget) for i in range(seeds))
    fast = collections.Counter(fast_plan(tab, cfg, budget, 10_000 + i) for i in range(seeds))
    acts = sorted(set(ref) | set(fast))
    table = np.array([[ref[a] for a in acts], [fast[a] for a in acts]])
    # merge sparse columns so the chi-square approximation holds
    keep = table.sum(axis=0) >= 10
    merged = np.column_stack([table[:, keep], table[:, ~keep].sum(axis=1)]) if (~keep).any() else table
    merged = merged[:, merged.sum(axis=0) > 0]
    return merged


@pytest.mark.parametrize("kind", KINDS)
def test_fast_matches_reference_in_distribution(kind):
    mdp = load_instance(INSTANCES / "sailing_3x3.ini")
    table = _contingency(kind, mdp, 200, 600)
    if table.shape[1] < 2:
        return  # both engines always pick the same action
    assert stats.chi2_contingency(table).pvalue > 0.001
