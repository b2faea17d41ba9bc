"""Exception hierarchy shared by every belldisc package."""
from __future__ import annotations

from typing import Optional


class BellDiscError(Exception):
    """Base class for all errors raised by the simulator."""


class InvalidInputError(BellDiscError, ValueError):
    pass


class DegenerateStateError(InvalidInputError):
    """Raised when a state has zero norm, e.g. after destructive interference."""


class CoverageError(BellDiscError, ValueError):
    """Raised when a state has support on spatial modes no detector watches."""


class CircuitValidationError(InvalidInputError):
    def __init__(self, message: str, element_index: Optional[int] = None):
        if element_index is not None:
            message = f"element {element_index}: {message}"
        super().__init__(message)
        self.element_index = element_index


class ConfigError(BellDiscError, ValueError):
    def __init__(self, message: str, path: Optional[str] = None,
                 line: Optional[int] = None, column: Optional[int] = None):
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}:{column if column is not None else 0}"
            where += ": "
        super().__init__(f"{where}{message}")
        self.path = path
        self.line = line
        self.column = column
