"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid static configuration: unknown kernel profile, degenerate
    geometry, inconsistent run settings."""


class UsageError(ValueError):
    """Invalid call: dimension mismatch, empty candidate set, malformed
    input data."""


class NumericalBreakdownError(RuntimeError):
    """A numerical procedure lost all significance and cannot continue."""


class GreedyBreakdownError(NumericalBreakdownError):
    """Newton extension attempted on a candidate whose squared power value
    is at or below the floor. Carries the offending candidate index and,
    when raised from a full run, the partial report collected so far."""

    def __init__(self, message, index, partial_report=None):
        super().__init__(message)
        self.index = index
        self.partial_report = partial_report


class SingularSystemError(NumericalBreakdownError):
    """Dense symmetric factorization hit a pivot below tolerance. Carries
    the smallest pivot encountered."""

    def __init__(self, message, smallest_pivot):
        super().__init__(message)
        self.smallest_pivot = smallest_pivot


class PowerExhausted(Exception):
    """Greedy termination signal: no unselected candidate has a squared
    power value above the floor."""
