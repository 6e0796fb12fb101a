"""Exception hierarchy shared by all modules."""


class AdjudicationError(Exception):
    """Base class for errors raised by this package."""


class InputError(AdjudicationError, ValueError):
    """Malformed or out-of-domain input data (empty bag, foreign value, ...)."""


class ConfigurationError(AdjudicationError):
    """Missing or unresolvable configuration (unknown operator, no order supplied)."""
