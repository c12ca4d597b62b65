"""Exception types shared across the toolkit."""


class LexivarError(ValueError):
    """Base class for all toolkit errors."""


class DegenerateInputError(LexivarError):
    """Input too short, constant, or otherwise unusable for the operation."""


class AlignmentError(LexivarError):
    """Series cannot be aligned to a common month range."""


class SingularDesignError(LexivarError):
    """Regressor matrix is rank deficient."""


class NonStationarityError(LexivarError):
    """Series still fails the unit-root test at the maximum differencing order."""


class ConfigurationError(LexivarError):
    """Invalid run configuration or inconsistent inputs."""


class CorpusFormatError(LexivarError):
    """Malformed corpus, lexicon, or indicator file."""

    def __init__(self, message, row=None, column=None):
        parts = []
        if row is not None:
            parts.append(f"row {row}")
        if column is not None:
            parts.append(f"column {column!r}")
        if parts:
            message = f"{message} ({', '.join(parts)})"
        super().__init__(message)
        self.row = row
        self.column = column


class GapError(CorpusFormatError):
    """Monthly data has missing months; imputation is never performed."""
