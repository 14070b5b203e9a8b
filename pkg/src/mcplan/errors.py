"""Exception types raised across the package."""


class McplanError(Exception):
    """Base class for all package errors."""


class ConfigError(McplanError, ValueError):
    """A domain, planner or experiment configuration is invalid."""


class CapabilityError(McplanError):
    """The requested operation needs something the model cannot provide.

    Typical case: an exact solver asked to work on a model that only
    offers sampled transitions.
    """


class ContractViolation(McplanError, ValueError):
    """A caller broke an operation's precondition (e.g. inapplicable action)."""


class UncoveredQuery(McplanError, KeyError):
    """A value table was queried outside the region it was computed for."""
