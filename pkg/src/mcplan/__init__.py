"""Monte-Carlo planning for finite-horizon generative MDPs.

Planners (Random, MAB-Uniform, epsilon-greedy, UCT, BRUE, BRUE_I,
BRUE_IC), benchmark domains, an exact finite-horizon oracle and an
experiment runner.
"""

from mcplan.errors import CapabilityError, ConfigError, ContractViolation, McplanError, UncoveredQuery
from mcplan.mdp import (GenerativeMdp, LazyPolicy, Outcome, TableMdp, execute_policy, generate_random_policy,
                        sample_transition)
from mcplan.rng import RandomSource

__version__ = "0.1.0"
