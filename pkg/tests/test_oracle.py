import io
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mcplan.domains import load_instance
from mcplan.errors import CapabilityError, UncoveredQuery
from mcplan.mdp import TableMdp
from mcplan.oracle import (enumerate_policies, export_tables, simple_regret, uniform_policy_value,
                           uniform_recommendation_regret, value_iteration)

import mdp_fixtures as fx

INSTANCES = Path(__file__).resolve().parent.parent / "instances"


def test_two_action_chain():
    vt = value_iteration(fx.two_arm(H=2))
    assert vt.value("s", 2) == 2.0
    assert vt.q_value("s", 2, "a2") == 1.0


def test_absorbing_zero_reward_all_zero():
    mdp = TableMdp({("s", a): [("s", 1.0, 0.0)] for a in "ab"}, "s", 4)
    vt = value_iteration(mdp)
    assert all(v == 0.0 for v in vt.v.values())


def test_uniform_value_two_arm():
    assert uniform_policy_value(fx.two_arm(H=1)).value("s", 1) == 0.5


def test_single_action_uniform_equals_optimal():
    mdp = fx.micro(5, n_actions=1)
    vt, ut = value_iteration(mdp), uniform_policy_value(mdp)
    for key, v in vt.v.items():
        assert ut.value(*key) == v


def test_simple_regret_values():
    vt = value_iteration(fx.two_arm(H=1, good=2.0, bad=1.0))
    assert simple_regret(vt, "s", 1, "a1") == 0.0
    assert simple_regret(vt, "s", 1, "a2") == 1.0


def test_uncovered_query():
    vt = value_iteration(fx.two_arm(H=1))
    with pytest.raises(UncoveredQuery):
        vt.value("s", 3)
    with pytest.raises(UncoveredQuery):
        vt.q_value("elsewhere", 1, "a1")


def test_needs_explicit_distributions():
    from mcplan.domains import SysAdminConfig, build_sysadmin
    mdp = build_sysadmin(SysAdminConfig(3, ((0, 1),), 0.1, 0.1, 0.9, 1.0, 3, explicit=False))
    with pytest.raises(CapabilityError):
        value_iteration(mdp)
    with pytest.raises(CapabilityError):
        uniform_policy_value(mdp)


def test_enumeration_counts():
    one = TableMdp({("s", a): [("t", 1.0, 0.0)] for a in "ab"} | {("t", "z"): [("t", 1.0, 0.0)]}, "s", 1)
    assert len(enumerate_policies(one)) == 2
    loop = TableMdp({("s", a): [("s", 1.0, float(a == "a"))] for a in "ab"}, "s", 2)
    pols = enumerate_policies(loop)
    assert len(pols) == 4
    assert sorted(pols.values.tolist()) == [0.0, 1.0, 1.0, 2.0]


def test_enumeration_too_large():
    mdp = TableMdp({(s, a): [((s + 1) % 6, 0.5, 0.0), ((s + 2) % 6, 0.5, 1.0)] for s in range(6) for a in range(3)},
                   0, 8)
    with pytest.raises(CapabilityError):
        enumerate_policies(mdp)


def test_enumeration_policy_lookup():
    mdp = fx.grid_fixture(H=2)
    pols = enumerate_policies(mdp)
    pi, value = pols[0]
    assert set(pi) == {("r", 0), ("u", 1), ("v", 1)}
    assert value == pols.values[0]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_oracles_agree_on_micro_mdps(seed):
    mdp = fx.micro(seed)
    H = mdp.horizon
    vt, ut = value_iteration(mdp), uniform_policy_value(mdp)
    pols = enumerate_policies(mdp)
    s0 = mdp.initial_state
    assert abs(vt.value(s0, H) - pols.values.max()) <= 1e-9
    assert abs(ut.value(s0, H) - pols.values.mean()) <= 1e-9
    assert np.all(pols.values <= vt.value(s0, H) + 1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_bellman_and_uniform_consistency(seed):
    mdp = fx.micro(seed)
    vt, ut = value_iteration(mdp), uniform_policy_value(mdp)
    for (s, h), v in vt.v.items():
        if h == 0:
            assert v == 0.0
            continue
        assert abs(v - max(vt.q_values(s, h).values())) <= 1e-12
        acts = mdp.actions(s)
        avg = sum(sum(o.prob * (o.reward + ut.value(o.state, h - 1)) for o in mdp.distribution(s, a))
                  for a in acts) / len(acts)
        assert abs(ut.value(s, h) - avg) <= 1e-12


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([0.5, 3.0, -2.0]))
def test_regret_invariant_to_reward_shift(seed, c):
    mdp = fx.micro(seed)
    H, s0 = mdp.horizon, mdp.initial_state
    a, b = value_iteration(mdp), value_iteration(fx.shifted(mdp, c))
    assert b.value(s0, H) == pytest.approx(a.value(s0, H) + H * c, abs=1e-9)
    for act in mdp.actions(s0):
        assert simple_regret(b, s0, H, act) == pytest.approx(simple_regret(a, s0, H, act), abs=1e-9)
        assert simple_regret(a, s0, H, act) >= -1e-12


def test_grid_fixture_frozen():
    mdp = fx.grid_fixture(H=4)
    vt = value_iteration(mdp)
    assert vt.q_values("r", 4) == {"L": 2.5, "R": 1.5}
    assert vt.optimal_actions("r", 4) == ["L"]
    assert uniform_policy_value(mdp).value("r", 4) == 1.5625
    assert len(enumerate_policies(mdp)) == 512


# values frozen from the shipped instance files
FROZEN = {
    "sailing_3x3.ini": (-4.0, 2.6041005714285714),
    "sailing_5x5.ini": (-8.601199999999999, 2.7047835752178293),
    "sailing_10x10.ini": (-22.121391230997794, 2.448900677166004),
    "navigation_4x3.ini": (0.8199999999999998, 0.82),
    "sysadmin_ring6.ini": (54.01048142440419, 0.14217819521269348),
}


@pytest.mark.parametrize("name", sorted(FROZEN))
def test_instance_values_frozen(name):
    mdp = load_instance(INSTANCES / name)
    vt = value_iteration(mdp)
    v, regret = FROZEN[name]
    assert vt.value(mdp.initial_state, mdp.horizon) == pytest.approx(v, rel=1e-12)
    assert uniform_recommendation_regret(vt, mdp.initial_state, mdp.horizon) == pytest.approx(regret, rel=1e-12)


def test_sailing_5x5_root_q_frozen():
    mdp = load_instance(INSTANCES / "sailing_5x5.ini")
    q = value_iteration(mdp).q_values(mdp.initial_state, 15)
    expected = {0: -10.314458456562399, 1: -8.601199999999999, 2: -11.32756, 3: -12.9746666424906,
                5: -12.9746666424906, 6: -11.974666642490599, 7: -10.9746666424906}
    assert q.keys() == expected.keys()
    for a in q:
        assert q[a] == pytest.approx(expected[a], rel=1e-12)


def test_export_tables_format():
    text = export_tables(value_iteration(fx.grid_fixture(H=2)))
    assert text.splitlines()[:2] == ["'r'\t2\t'L'\t1.0", "'r'\t2\t'R'\t0.5"]
    assert len(text.splitlines()) == 6
    buf = io.StringIO()
    assert export_tables(value_iteration(fx.grid_fixture(H=2)), buf) == buf.getvalue()
