"""Exception types shared across the package."""

from __future__ import annotations


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Evaluation requested exactly at a pole."""


class DivergenceError(DomainError):
    """The requested series or integral does not converge."""


class ConvergenceFailure(RuntimeError):
    """An iterative scheme exhausted its budget without converging."""


class AccuracyShortfall(RuntimeError):
    """A computation finished but below the requested digit target.

    Carries the best value attained and an honest digit estimate so callers
    (CLI exit code 3, registry status "shortfall") can still report it.
    """

    def __init__(self, message: str, value=None, achieved: int | None = None):
        super().__init__(message)
        self.value = value
        self.achieved = achieved


class NonCuspidalError(ValueError):
    """L-value machinery requires a cusp form (leading exponent >= 1)."""


class UnknownIdError(KeyError):
    """Lookup into a catalog/registry with an id that is not there."""
