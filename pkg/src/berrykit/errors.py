"""Shared error types; the CLI maps these onto exit codes."""

from __future__ import annotations


class BerrykitError(Exception):
    pass


class InputError(BerrykitError):
    """Malformed or out-of-domain input (exit code 2)."""


class NotACodeError(InputError):
    """Number is not the code of any token sequence."""


class NotWellFormedError(InputError):
    """Codes a token sequence, but not a canonical term or formula."""


class NotDelta0Error(InputError):
    """Formula has an unbounded quantifier where none is allowed."""


class CapExceededError(InputError):
    """Requested search range beyond the configured feasibility cap."""


class CheckFailedError(BerrykitError):
    """A verdict or re-check came out negative (exit code 1)."""


class RefusedError(CheckFailedError):
    """Asked to certify something detectably false."""


class BudgetExhaustedError(BerrykitError):
    """Verdict not reachable within the given budget (exit code 3)."""

    def __init__(self, message: str, budget: int | None = None):
        super().__init__(message)
        self.budget = budget
