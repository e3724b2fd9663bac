"""Exception types shared across the library.

Every error raised by the library derives from InfluenceDynError, so callers
can catch one base class. Structural errors (malformed arrays, bad shapes)
are kept distinct from semantic check failures, which carry diagnostics.
"""

from __future__ import annotations


class InfluenceDynError(Exception):
    """Base class for all library errors."""


class StructuralError(InfluenceDynError, ValueError):
    """Input is malformed (non-square, non-finite, wrong length, bad dtype)."""


class InvalidMatrixError(InfluenceDynError, ValueError):
    """A matrix failed validation; carries the full report."""

    def __init__(self, report):
        self.report = report
        checks = ", ".join(v.check for v in report.violations)
        super().__init__(f"interaction matrix validation failed: {checks}")


class InvalidVectorError(InfluenceDynError, ValueError):
    """A vector violates its domain invariant (simplex or unit interval)."""


class IterationLimitError(InfluenceDynError, RuntimeError):
    """An iterative solver hit its iteration cap before converging."""

    def __init__(self, iterations: int, residual: float):
        self.iterations = iterations
        self.residual = residual
        super().__init__(
            f"no convergence within {iterations} iterations "
            f"(last residual {residual:.3e})"
        )


class SingularMatrixError(InfluenceDynError, ArithmeticError):
    """Elimination met a pivot below tolerance; names the failing column."""

    def __init__(self, column: int, detail: str = ""):
        self.column = column
        msg = f"matrix is singular to tolerance at pivot column {column}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class ConstraintError(InfluenceDynError, ValueError):
    """Coefficient closure or regime constraint violated."""


class DegeneracyError(InfluenceDynError, ValueError):
    """Two or more agents are fully self-weighted; the dominant left
    eigenvector is no longer unique."""


class IsolatedAgentError(InfluenceDynError, ValueError):
    """An adapter input has a unit self-weight, leaving no neighbor mass."""


class ConfigError(InfluenceDynError, ValueError):
    """Experiment configuration rejected; carries the offending field path."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")
