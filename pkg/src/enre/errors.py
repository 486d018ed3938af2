"""Exception types shared across the package."""


class EnreError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(EnreError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class DefinitionsError(EnreError):
    """Malformed definitions file or operator parameter table."""


class CapabilityError(EnreError):
    """An operator lacks the capability an operation needs.

    ``op`` names the offending operator, e.g. ``shclose`` for a DFA build.
    """

    def __init__(self, op: str, message: str):
        self.op = op
        super().__init__(f"{op}: {message}")


class UndecidedError(CapabilityError):
    """Nullability of an expression could not be decided."""


class StateCapExceeded(EnreError):
    def __init__(self, limit: int):
        self.limit = limit
        super().__init__(f"automaton exceeded {limit} states")


class CapExceeded(EnreError):
    def __init__(self, limit: int):
        self.limit = limit
        super().__init__(f"enumeration exceeded cap of {limit} elements")
