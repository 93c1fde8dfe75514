"""Package-level exception types."""

from __future__ import annotations


class HyperRamseyError(Exception):
    """Base class for errors raised by this package."""


class BudgetExceededError(HyperRamseyError):
    """An enumeration or search would exceed its configured budget."""


class SizeLimitError(HyperRamseyError):
    """Input exceeds a hard size cap (exact solvers, digit caps)."""


class RetriesExhaustedError(HyperRamseyError):
    """A retry-until-success procedure hit its attempt cap.

    Carries the best attempt seen so that callers can report it.
    """

    def __init__(self, message: str, best=None, attempts: int = 0):
        super().__init__(message)
        self.best = best
        self.attempts = attempts
