"""Exception types shared across the package."""


class SurfrankError(Exception):
    """Base class for all package-specific errors."""


class InvalidDegreeError(SurfrankError, ValueError):
    """Extension degree out of range (k must be >= 1)."""


class SingularCurveError(SurfrankError, ValueError):
    """An operation requiring a smooth curve received a singular one."""


class InvalidTraceError(SurfrankError, ValueError):
    """A trace input violates the Hasse bound |a| <= 2*sqrt(q)."""


class BadSurfaceReductionError(SurfrankError, ValueError):
    """Reduction mod l has identically vanishing discriminant."""


class IsotrivialSurfaceError(SurfrankError, ValueError):
    """Surface has constant j-invariant; L-polynomial degree is undefined."""


class InconsistentDataError(SurfrankError, RuntimeError):
    """Exact arithmetic produced values violating a structural invariant.

    Signals an upstream bug (e.g. a wrong conductor degree), never bad input.
    """


class SearchTooLargeError(SurfrankError, ValueError):
    """Requested exhaustive search exceeds the configured budget."""


class BudgetExceededError(SurfrankError, ValueError):
    """Requested exhaustive computation exceeds its size precondition."""


class UnsupportedError(SurfrankError, ValueError):
    """Input outside the supported domain (e.g. modulus with factor <= 3)."""


class CheckpointError(SurfrankError, RuntimeError):
    """Checkpoint file is corrupt or belongs to a different configuration."""
