"""Small hand-made MDPs shared by the tests."""

import numpy as np

from mcplan.mdp import TableMdp


def chain(H=5, reward=1.0):
    """One state, one action, fixed reward per step."""
    return TableMdp({("s", "go"): [("s", 1.0, reward)]}, "s", H, "chain")


def two_arm(H=1, good=1.0, bad=0.0):
    """Deterministic bandit repeated H times: arm ``a1`` pays ``good``, ``a2`` pays ``bad``."""
    return TableMdp({("s", "a1"): [("s", 1.0, good)], ("s", "a2"): [("s", 1.0, bad)]}, "s", H, "two_arm")


def lottery(H=5, actions=2):
    """Pure noise: every action pays 1 or 0 with probability 1/2 and stays put."""
    return TableMdp({("s", a): [("s", 0.5, 1.0), ("s", 0.5, 0.0)] for a in range(actions)}, "s", H, "lottery")


def spread(H=4):
    """Deterministic spread: action 0 pays 1, action 1 pays 0, from one state."""
    return TableMdp({("s", 0): [("s", 1.0, 1.0)], ("s", 1): [("s", 1.0, 0.0)]}, "s", H, "spread")


def coin_bandit(H=1):
    """Two actions with Bernoulli payoffs 0.7 and 0.3 (one step)."""
    return TableMdp({("s", "x"): [("s", 0.7, 1.0), ("s", 0.3, 0.0)],
                     ("s", "y"): [("s", 0.3, 1.0), ("s", 0.7, 0.0)]}, "s", H, "coin")


def micro(seed, n_states=None, n_actions=None, H=None, shift=0.0):
    """Random micro MDP (|S| <= 6, |A| <= 3, H <= 4) with dyadic probabilities and rewards."""
    rng = np.random.default_rng(seed)
    nS = int(n_states or rng.integers(2, 7))
    H = int(H or rng.integers(2, 5))
    trans = {}
    for s in range(nS):
        nA = int(n_actions or rng.integers(1, 4))
        for a in range(nA):
            k = int(rng.integers(1, 3))
            succ = rng.choice(nS, size=k, replace=False)
            probs = [1.0] if k == 1 else [0.25, 0.75]
            trans[(s, a)] = [(int(t), p, float(rng.integers(-4, 5)) / 2 + shift) for t, p in zip(succ, probs)]
    return TableMdp(trans, 0, H, f"micro{seed}")


def shifted(mdp: TableMdp, c: float) -> TableMdp:
    """Same model with ``c`` added to every reward."""
    trans = {(s, a): [(o.state, o.prob, o.reward + c) for o in mdp.distribution(s, a)]
             for s in mdp.states for a in mdp.actions(s)}
    return TableMdp(trans, mdp.initial_state, mdp.horizon, mdp.name + "+c")


def grid_fixture(H=4):
    """Tiny stochastic MDP with a decision at the root and distinct successor states."""
    return TableMdp({
        ("r", "L"): [("u", 0.5, 0.0), ("v", 0.5, 1.0)],
        ("r", "R"): [("v", 1.0, 0.5)],
        ("u", "L"): [("u", 1.0, 1.0)], ("u", "R"): [("v", 0.5, 0.0), ("r", 0.5, 2.0)],
        ("v", "L"): [("r", 1.0, 0.0)], ("v", "R"): [("u", 0.25, 3.0), ("v", 0.75, -1.0)],
    }, "r", H, "grid")
