"""Package-wide exception types.

Input validation raises plain ValueError at the point of entry; anything
that fails *numerically* (a bracket that will not close, a time step that
underflows, an integration that cannot reach its target) raises
NumericalError so callers can distinguish bad input (exit code 1) from a
computation that gave up (exit code 2).
"""


class GrowupError(Exception):
    """Base class for package errors."""


class NumericalError(GrowupError):
    """A numerical procedure failed to converge or lost validity."""
