"""Exception types shared across the package."""

from __future__ import annotations


class AltgdError(Exception):
    """Base class for all package-specific errors."""


class NonFiniteError(AltgdError, ValueError):
    """A matrix contained NaN or Inf where finite entries are required."""


class DegenerateMatrixError(AltgdError, ValueError):
    """An input matrix is zero (or numerically rank-0) where that is not allowed."""


class InfeasibleParametersError(AltgdError, ValueError):
    """Parameters violate a feasibility constraint of the convergence theory."""


class RankDeficiencyError(AltgdError, ValueError):
    """The smallest retained singular value is non-positive."""


class TrivialTargetError(AltgdError, ValueError):
    """The requested accuracy is already met at initialization."""


class OutOfRegimeError(AltgdError, ValueError):
    """A parameter lies outside the regime where the bound is valid."""


class DivergenceError(AltgdError, RuntimeError):
    """The iteration produced non-finite values."""

    def __init__(self, iteration: int, message: str | None = None):
        self.iteration = iteration
        super().__init__(message or f"non-finite iterate at iteration {iteration}")


class MonitorViolationError(AltgdError, RuntimeError):
    """A runtime invariant monitor failed in fatal mode.

    Carries the violation log and the partial trajectory record on the
    ``violations`` and ``record`` attributes.
    """

    def __init__(self, violations, record=None):
        self.violations = list(violations)
        self.record = record
        first = self.violations[0]
        super().__init__(
            f"monitor '{first.monitor}' violated at iteration {first.t}: "
            f"measured {first.measured:.6e}, bound {first.bound:.6e}"
        )


class ConfigError(AltgdError, ValueError):
    """An experiment configuration is invalid; the message names the field."""
