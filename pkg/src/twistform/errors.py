"""Exception types shared across the package.

Each class maps to one CLI exit code so that scripted callers can tell
malformed input apart from mathematically unsupported input.
"""


class TwistformError(Exception):
    """Base class for all package-specific errors."""

    exit_code = 1


class InputError(TwistformError):
    """Malformed or inconsistent external input (JSON, CLI arguments)."""

    exit_code = 2


class UnsupportedRankError(TwistformError):
    """The matrix rank is outside the range a routine handles."""

    exit_code = 3


class ExtensionCapError(TwistformError):
    """A computation would need a field extension beyond the degree cap."""

    exit_code = 4

    def __init__(self, message, last_dimension=None):
        super().__init__(message)
        self.last_dimension = last_dimension


class VerificationError(TwistformError):
    """A certificate failed to replay; carries the first failing step index."""

    exit_code = 5

    def __init__(self, message, step_index=None):
        super().__init__(message)
        self.step_index = step_index


class BudgetError(TwistformError):
    """An enumeration would exceed the configured desk-scale budget."""

    exit_code = 6


class ShapeError(TwistformError):
    """An intermediate matrix violated the block pattern the reduction expects.

    This signals an internal invariant failure, never bad user input; the
    offending matrix is embedded in the message to make reports actionable.
    """

    exit_code = 1
