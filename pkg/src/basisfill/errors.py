"""Exception hierarchy shared across the package."""

from __future__ import annotations


class BasisfillError(Exception):
    """Base class for all package errors."""


class InputError(BasisfillError):
    """Invalid argument or precondition violation by the caller."""


class SchemaError(BasisfillError):
    """An instance or solution file failed structural validation."""


class RejectedMove(BasisfillError):
    """A move would violate a table invariant; the table was left unchanged."""

    def __init__(self, invariant: str, detail: str):
        super().__init__(f"{invariant}: {detail}")
        self.invariant = invariant
        self.detail = detail


class InfeasibleError(BasisfillError):
    """A requested construction is not achievable from the current state."""


class OracleViolationError(BasisfillError):
    """An operation guaranteed by the matroid axioms failed.

    This invalidates every downstream guarantee, so callers must abort
    rather than continue with a broken oracle.
    """


class SearchBudgetExceeded(BasisfillError):
    """An exact search exceeded its node guard."""
