"""Exception types shared across the package."""


class VoteCostError(Exception):
    """Base class for all package-specific errors."""


class DomainError(VoteCostError, ValueError):
    """An argument lies outside a function's mathematical domain."""


class ConvergenceError(VoteCostError, RuntimeError):
    """An iterative solver exhausted its iteration budget."""


class TruncationLimitError(VoteCostError, RuntimeError):
    """A truncated-sum evaluation would exceed its configured cell budget."""
