"""Exception hierarchy shared by all modules."""


class UnifyError(Exception):
    """Base class for every error raised by this package."""


class TypingError(UnifyError, ValueError):
    """A binding would give a variable a value outside its declared type."""


class InputError(UnifyError, ValueError):
    """Input violates a precondition (simplicity, linearity, unifier-hood, ...)."""


class ParseError(UnifyError, ValueError):
    """Malformed problem or substitution text."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class VerificationError(UnifyError):
    """A selection sequence could not be replayed or justified."""

    def __init__(self, message: str, step: int | None = None):
        self.step = step
        super().__init__(message if step is None else f"step {step}: {message}")


class SearchLimitExceeded(UnifyError):
    """The breadth-first search grew past its node cap."""


class TerminationViolation(UnifyError, AssertionError):
    """A derivation step did not decrease the termination measure as required."""
