"""Exception hierarchy shared by every module."""


class PricedQueryError(Exception):
    """Base class for all errors raised by this package."""


class InputError(PricedQueryError, ValueError):
    """An argument violates an operation's precondition."""


class CapacityError(PricedQueryError):
    """The instance is too large for an exact computation."""


class SpecError(PricedQueryError, ValueError):
    """A function-spec or tree document is malformed.

    The message starts with a JSON-path style location such as ``$.terms[1]``.
    """

    def __init__(self, location, message):
        self.location = location
        super().__init__(f"{location}: {message}")


class StateError(PricedQueryError):
    """An operation was called on an object in the wrong state."""


class UnsupportedRandomnessError(PricedQueryError):
    """Exact statistics were requested for a strategy with arbitrary internal randomness."""
