"""Exception types shared across the package."""


class DasepError(Exception):
    """Base class for all package-specific errors."""


class InvalidParams(DasepError):
    """Chain or enumeration parameters out of range (need n > q >= 1, p >= 1)."""


class NotDivisible(DasepError, ArithmeticError):
    """Exact polynomial division was requested but the divisor does not divide."""


class ParseError(DasepError, ValueError):
    """A polynomial or word string does not match the expected grammar."""


class NotStochastic(DasepError):
    """A transition matrix row fails to be a probability distribution at a point."""


class KernelDimensionNotOne(DasepError):
    """The balance equations do not have a one-dimensional solution space.

    Raised both when the chain is reducible and when elimination finds more
    (or fewer) than one free column; either way there is no unique stationary
    vector to return.
    """


class StateCapExceeded(DasepError):
    """The state space is larger than the configured solver cap."""


class DegreeCapExceeded(DasepError):
    """A solver intermediate exceeded the configured total-degree cap."""


class IndexMismatch(DasepError):
    """Two indexed objects (vectors, distributions) refer to different state sets."""


class AllZerosOrAllOnes(DasepError):
    """block_count is undefined for constant binary words."""


class FixtureMissing(DasepError):
    """A required integer-sequence fixture file is absent or too short."""
