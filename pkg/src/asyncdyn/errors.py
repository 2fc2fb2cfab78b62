"""Exception types shared across the package."""


class AsyncdynError(Exception):
    """Base class for all library errors."""


class InvalidInput(AsyncdynError):
    """An argument is outside its documented domain."""


class InsufficientHistory(AsyncdynError):
    """A history window is shorter than the recall depth requires."""


class Unsupported(AsyncdynError):
    """The operation is not defined for this kind of system."""


class BudgetExceeded(AsyncdynError):
    """An enumeration would materialize more states than the configured budget."""


class InvalidWitness(AsyncdynError):
    """A replay witness is malformed or its schedule is unfair."""


class NonUniqueBestResponse(AsyncdynError):
    """A best-response tie was hit without an explicit tie-breaking rule."""


class ParseError(AsyncdynError):
    """A scenario document is not syntactically valid."""


class SchemaError(AsyncdynError):
    """A scenario document violates the schema; carries the offending field path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message
