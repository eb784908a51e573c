"""Exception hierarchy for the wasserstein-tradeoffs package."""

from typing import Any, Optional


class TradeoffError(Exception):
    """Base class for all package errors."""


class InputError(TradeoffError, ValueError):
    """Invalid setting, argument or dimension."""


class DegenerateDirectionError(InputError):
    """Direction lies in the null space of the covariance."""


class ConfigError(InputError):
    """Run configuration problem, anchored to a file position when known."""

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        self.path = path
        self.line = line
        self.problem = message
        if path is not None and line is not None:
            message = f"{path}:{line}: {message}"
        elif path is not None:
            message = f"{path}: {message}"
        super().__init__(message)


class SolverError(TradeoffError, RuntimeError):
    """Iterative solver exhausted its budget without meeting its tolerance.

    Attributes:
        residual: Last fixed-point residual or gradient norm
        lam: Tradeoff weight being solved when the failure occurred
        cell: Sweep cell key, when raised from inside a sweep
    """

    def __init__(
        self,
        message: str,
        residual: float = float("nan"),
        lam: Optional[float] = None,
        cell: Optional[Any] = None,
    ):
        self.residual = residual
        self.lam = lam
        self.cell = cell
        super().__init__(message)

    def with_context(self, lam: Optional[float] = None, cell: Optional[Any] = None) -> "SolverError":
        """Return a copy carrying the offending lambda and/or sweep cell."""
        lam = self.lam if lam is None else lam
        cell = self.cell if cell is None else cell
        parts = [str(self.args[0]) if self.args else "solver failure"]
        if lam is not None and self.lam is None:
            parts.append(f"lambda={lam:.6g}")
        if cell is not None and self.cell is None:
            parts.append(f"cell={cell}")
        return SolverError(" ".join(parts), residual=self.residual, lam=lam, cell=cell)
