"""Exception hierarchy shared by all modules."""


class BnnSynthError(Exception):
    """Base class for every error raised by this package."""


class WidthError(BnnSynthError, ValueError):
    """Bit widths of vectors, functions or terms do not line up."""


class NotApplicable(WidthError):
    """A function cannot be applied to the innermost placeholder of a term."""


class ExpansionError(BnnSynthError, ValueError):
    pass


class UnboundVariable(ExpansionError):
    pass


class SpecSyntaxError(BnnSynthError, ValueError):
    """Raised by the spec parser; carries a 1-based line and column."""

    def __init__(self, message, line, column):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


class EncodingError(BnnSynthError, ValueError):
    pass


class ResourceLimit(BnnSynthError):
    """The tableau search exceeded its node budget before reaching a verdict."""


class InconsistentModel(BnnSynthError):
    """A solver model maps one block input to two different outputs."""
