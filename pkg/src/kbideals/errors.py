"""Exception types shared across the package."""

from __future__ import annotations

from .laurent import NotDivisible

__all__ = [
    "NotDivisible",
    "Inadmissible",
    "BoundExceeded",
    "MalformedDiagram",
    "DiagramParseError",
    "InconsistentSystem",
    "UnderDetermined",
    "NotUnitMultipleOfInteger",
    "UnknownName",
]


class Inadmissible(ValueError):
    """A colour triple violates the admissibility conditions."""


class BoundExceeded(RuntimeError):
    """A configured size bound (crossings, strands) was exceeded."""


class MalformedDiagram(ValueError):
    """A diagram is not well formed (bad edge incidences, inconsistent cut data, ...)."""


class DiagramParseError(MalformedDiagram):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class InconsistentSystem(ArithmeticError):
    """The graph-coefficient linear system has a nonzero residual."""


class UnderDetermined(ArithmeticError):
    """The graph-coefficient system needs a larger colour bound."""


class NotUnitMultipleOfInteger(ArithmeticError):
    """A cyclotomic value expected to be omega^j * n is not of that form."""


class UnknownName(KeyError):
    """Unknown catalog entry."""
