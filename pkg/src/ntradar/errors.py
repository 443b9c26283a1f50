"""Exception and warning types shared across the package."""

from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class DegenerateInputError(DomainError):
    """Input is degenerate (e.g. zero power where a ratio is required)."""


class NumericError(ArithmeticError):
    """A numerical routine failed to reach its accuracy target."""


class OptimizationError(NumericError):
    """All optimizer starts failed to converge; carries a trace of attempts."""

    def __init__(self, message: str, trace: list | None = None):
        super().__init__(message)
        self.trace = trace or []


class InsufficientTrialsError(ValueError):
    """Too few Monte Carlo trials to resolve the requested quantile."""

    def __init__(self, trials: int, pfa: float, min_trials: int):
        super().__init__(
            f"{trials} trials cannot calibrate a threshold at pfa={pfa:g}; "
            f"need at least {min_trials} (trials * pfa >= 100)"
        )
        self.min_trials = min_trials


class ValidityWarning(UserWarning):
    """Result requested outside the stated validity regime of a formula."""
