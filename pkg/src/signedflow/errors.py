"""Shared exception taxonomy.

Mathematical negatives (no flow exists, graph is balanced, ...) are never
exceptions; they are ordinary return values.  Exceptions mark conditions
outside an operation's contract.
"""

from __future__ import annotations


class PreconditionError(ValueError):
    """Input violates a stated precondition (CLI exit code 2)."""


class NotFlowAdmissibleError(PreconditionError):
    """Operation requires a flow-admissible graph."""


class ResourceCapExceeded(RuntimeError):
    """A configured search cap was hit before an exact answer was reached
    (CLI exit code 3).  Carries the cap and the work done so far."""

    def __init__(self, message: str, cap: int | None = None, spent: int | None = None):
        super().__init__(message)
        self.cap = cap
        self.spent = spent


class InvariantViolation(RuntimeError):
    """A guaranteed internal invariant failed: either the input lies about
    its preconditions or there is a genuine bug (CLI exit code 4)."""
