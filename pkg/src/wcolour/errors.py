"""Exception types shared across wcolour."""


class WColourError(Exception):
    """Base class for wcolour errors."""


class InvalidInputError(WColourError, ValueError):
    """Rejected input: bad parameters, malformed files, inconsistent flags."""


class ContractViolation(WColourError, AssertionError):
    """An internal guarantee failed (e.g. a colouring that should be proper is not)."""
