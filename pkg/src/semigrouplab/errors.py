"""Exception types shared across the package."""


class SemigroupLabError(Exception):
    """Base class for all package-specific errors."""


class GridMismatchError(SemigroupLabError):
    """Two grid functions live on different grids."""


class ResolutionError(SemigroupLabError):
    """A mollifier scale is too fine for the grid to resolve."""


class ResolventSingularityError(SemigroupLabError):
    """lambda is numerically too close to a symbol value on the grid."""


class SymbolEvaluationError(SemigroupLabError):
    """A symbol produced non-finite values."""


class HypothesisViolationError(SemigroupLabError):
    """A constructor precondition on a symbol family failed."""


class UnsupportedFamilyError(SemigroupLabError):
    """Requested symbol family is outside the supported classes."""


class SpaceTimeSupportError(SemigroupLabError):
    """A space-time test function is not supported inside the open slab."""


class InsufficientDataError(SemigroupLabError):
    """Too few sample points for a requested fit or extraction."""


class OverflowGuardError(SemigroupLabError):
    """An exponential factor would overflow; growth bound violated."""


class ConfigError(SemigroupLabError):
    """Experiment configuration is missing, malformed, or inconsistent."""
