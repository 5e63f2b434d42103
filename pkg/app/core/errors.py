"""Exception hierarchy shared by the library and the command line."""
from typing import Any, Optional


class EdgeWalkError(Exception):
    """Base class for all library errors."""

    exit_code: int = 2


class DimensionError(EdgeWalkError, ValueError):
    """Vector or matrix shapes do not agree."""


class PreconditionError(EdgeWalkError, ValueError):
    """Inputs violate an operation's precondition (e.g. infeasible thresholds)."""


class InstanceTooLarge(PreconditionError):
    """Instance exceeds the exhaustive oracle's cap."""


class ParseError(EdgeWalkError, ValueError):
    """Malformed instance file."""

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        self.path = path
        self.line = line
        location = ""
        if path is not None:
            location = f"{path}:{line}: " if line is not None else f"{path}: "
        elif line is not None:
            location = f"line {line}: "
        super().__init__(f"{location}{message}")


class NumericFailure(EdgeWalkError, ArithmeticError):
    """Non-finite values appeared in the walk state."""

    exit_code = 3

    def __init__(self, message: str, step: int):
        self.step = step
        super().__init__(f"{message} (step {step})")


class RetriesExhausted(EdgeWalkError, RuntimeError):
    """A boosted procedure failed on every attempt."""

    exit_code = 1

    def __init__(self, message: str, best: Any = None, progress: Any = None):
        self.best = best
        self.progress = progress
        super().__init__(message)
