"""Exception hierarchy shared by the compute modules and the CLI."""

from __future__ import annotations


class RelmultError(Exception):
    """Base class for every error raised by this package."""


class InhomogeneousInput(RelmultError, ValueError):
    """A polynomial that must be multihomogeneous is not."""


class RingMismatch(RelmultError, ValueError):
    """Two pieces from different rings were combined."""


class NegativeExponent(RelmultError, ValueError):
    pass


class ContainmentViolation(RelmultError):
    """A subspace that must be nested in another is not (engine bug)."""


class FitError(RelmultError):
    pass


class WindowTooSmall(FitError, ValueError):
    pass


class NoStabilization(FitError):
    """The numerical function did not become polynomial inside the search budget."""

    def __init__(self, message: str, last_origin: int | None = None):
        super().__init__(message)
        self.last_origin = last_origin


class NonIntegralLeadingCoefficient(FitError):
    pass


class NegativeLeadingCoefficient(FitError):
    pass


class StabilizationMismatch(RelmultError):
    """The escalating-t route and the Buchsbaum-Rim route disagree."""


class NegativeExceptionalDegree(RelmultError):
    pass


class CriteriaDisagreement(RelmultError):
    pass


class SizeBoundExceeded(RelmultError):
    pass


class ParseError(RelmultError):
    """Syntax or semantic error in a problem document, tagged with a position."""

    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message

    def to_dict(self) -> dict:
        return {
            "error": type(self).__name__,
            "line": self.line,
            "column": self.column,
            "message": self.message,
        }


class UndeclaredName(ParseError):
    pass


class InhomogeneousRelation(ParseError):
    pass
