"""Exception types raised by the public API."""


class MbrankError(ValueError):
    """Base class for all library-specific errors."""


class EmptySubsetError(MbrankError):
    """A Gram matrix was requested over an empty column set."""


class AlreadyCenteredError(MbrankError):
    """center() was applied to a Gram matrix that is already centered."""


class NotCenteredError(MbrankError):
    """A measure received a Gram matrix that has not been centered."""


class DimensionMismatchError(MbrankError):
    """Two Gram matrices of different sizes were combined."""


class BadTargetError(MbrankError):
    """The target column index is out of range or leaves no candidates."""


class TooFewSamplesError(MbrankError):
    """Not enough samples to run the requested statistical test."""


class SingularConditioningError(MbrankError):
    """The correlation submatrix for a partial correlation is singular."""


class EmptyTruthError(MbrankError):
    """A ground-truth blanket with no members was passed to a metric."""


class BadOrderError(MbrankError):
    """A ranking is not a permutation of the non-target variables."""


class BadKError(MbrankError):
    """Clip size is outside the valid range for the ranking."""


class UndefinedScoreError(MbrankError):
    """Accuracy of two empty sets is undefined."""


class TooFewTrialsError(MbrankError):
    """Aggregation needs at least two scores."""


class BadExperimentError(MbrankError):
    """Unknown experiment tag passed to a sweep."""


class DatasetParseError(MbrankError):
    """A dataset or sidecar file could not be parsed."""
