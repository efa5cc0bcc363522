"""Exception types shared across the package."""

from __future__ import annotations


class MaxentProbeError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(MaxentProbeError):
    """Invalid input data (scenario documents, matrices, dimensions).

    ``path`` locates the offending field for document-level errors, e.g.
    ``backend.algebra_basis[2]``.
    """

    def __init__(self, message: str, *, path: str = "") -> None:
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class DensityCheckError(MaxentProbeError):
    """Input failed a density-matrix precondition beyond tolerance."""


class SolverError(MaxentProbeError):
    """Base class for numerical solver failures."""


class ConvergenceError(SolverError):
    """An iterative solver exhausted its budget without reaching tolerance.

    Carries the final residuals so callers can report the failure instead of
    silently degrading the answer.
    """

    def __init__(self, message: str, *, residuals: dict | None = None,
                 iterations: int = 0) -> None:
        self.residuals = dict(residuals or {})
        self.iterations = iterations
        detail = ", ".join(f"{k}={v:.3e}" for k, v in self.residuals.items())
        super().__init__(f"{message} [{detail}]" if detail else message)


class InfeasibleMeanError(SolverError):
    """The requested mean value lies outside the projected state space."""

    def __init__(self, message: str, *, slack: float = float("nan")) -> None:
        self.slack = slack
        super().__init__(message)
