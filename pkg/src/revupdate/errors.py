"""Exception hierarchy shared by all modules."""


class RevUpdateError(Exception):
    """Base class for errors raised by this package."""


class DomainError(RevUpdateError, ValueError):
    """An argument lies outside the valid domain of an operation."""


class GridRangeError(DomainError):
    """A parameter value lies outside the grid bounds."""


class AlignmentError(RevUpdateError, ValueError):
    """Two curves were combined on different grids."""


class NumericError(RevUpdateError, ArithmeticError):
    """A numerical procedure failed to converge or lost all precision."""


class UnderflowError(NumericError):
    """Posterior mass vanished before normalization."""


class ConfigError(RevUpdateError, ValueError):
    """A run configuration failed validation."""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class TrialError(RevUpdateError):
    """A Monte Carlo trial failed; ``trial`` is its index."""

    def __init__(self, trial, cause):
        super().__init__(f"trial {trial} failed: {cause}")
        self.trial = trial
        self.cause = cause
