"""Exception types shared across the package.

The CLI maps :class:`PreconditionError` (and its subclasses) to exit code 3.
"""


class HrnnFsaError(Exception):
    """Base class for every error raised on purpose by this package."""


class ParseError(HrnnFsaError, ValueError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class InvalidArgumentError(HrnnFsaError, ValueError):
    pass


class InvalidPathError(HrnnFsaError, ValueError):
    pass


class UnknownSymbolError(HrnnFsaError, KeyError):
    def __str__(self) -> str:
        return f"unknown symbol {self.args[0]!r}"


class ShapeError(HrnnFsaError, ValueError):
    pass


class DegenerateDistributionError(HrnnFsaError, ValueError):
    """Every score is -inf, so no distribution can be formed."""


class PreconditionError(HrnnFsaError, ValueError):
    """The input automaton lacks a property the operation needs."""


class BudgetExceededError(HrnnFsaError, RuntimeError):
    pass


class SimulationCorruptError(HrnnFsaError, RuntimeError):
    """A threshold net produced a data vector that decodes to no state."""


class AlphabetMismatchError(HrnnFsaError, ValueError):
    pass
