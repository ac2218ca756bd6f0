"""Exception types shared across the package."""


class TreepackError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(TreepackError):
    """A run configuration violates its declared invariants."""


class DivisibilityError(TreepackError):
    """A required divisibility condition (t | n, t | tau, tau | n) fails."""


class FormatError(TreepackError):
    """A text input file is malformed.

    Carries the 1-based line number of the offending line when known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class VerificationError(TreepackError):
    """A packing result failed re-verification against its host graph."""
