"""Exception hierarchy shared by every module."""


class RegressiaError(Exception):
    """Base class for all errors raised by the package."""


class BudgetError(RegressiaError):
    """A configured cap would be exceeded; the computation was not attempted."""


class MissingKeyError(RegressiaError, KeyError):
    """A map was queried outside its domain."""

    def __init__(self, key, what="map"):
        self.key = key
        super().__init__(f"{what} is undefined at {key!r}")

    def __str__(self):
        return self.args[0]


class PreconditionError(RegressiaError, ValueError):
    """An input violates an operation's stated precondition."""


class ContractViolation(RegressiaError):
    """A user-supplied functional broke the contract it was declared under."""


class BefSyntaxError(RegressiaError, ValueError):
    def __init__(self, message, line=1, column=1):
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})")


class NestedApplicationError(BefSyntaxError):
    pass
