"""Exception hierarchy shared by every extset module."""


class ExtsetError(ValueError):
    """Base class for all library errors."""


class ParseError(ExtsetError):
    """A family or instance file does not follow the expected grammar."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class GroundSizeError(ExtsetError):
    """Ground size outside [1, MAX_GROUND] or mismatched between families."""


class ElementRangeError(ExtsetError):
    """An element or index lies outside the ground set."""


class PreconditionError(ExtsetError):
    """An operation was called on inputs violating its precondition.

    ``reason`` is a short machine-readable tag so callers can tell
    distinct precondition failures apart.
    """

    def __init__(self, message: str, reason: str = "precondition"):
        self.reason = reason
        super().__init__(message)


class InternalConsistencyError(RuntimeError):
    """Two independent computations of the same quantity disagreed."""
