"""Exception types shared across the package.

The precision errors form a small protocol: `InsufficientPrecision` means
"retry me with a tighter enclosure", `PrecisionExhausted` means the retry
budget ran out.  Both may carry partial results so long computations are
not wasted.
"""

from __future__ import annotations


class InsufficientPrecision(ArithmeticError):
    """An enclosure is too wide to decide the requested question.

    Callers holding the original exact input should escalate the working
    precision and retry.  Optional payload: partial results of a staged
    computation (see `symmetry.reconstruct`).
    """

    def __init__(self, message: str, *, index: int | None = None, partial=None):
        super().__init__(message)
        self.index = index
        self.partial = partial


class PrecisionExhausted(ArithmeticError):
    """Escalation reached `PrecisionContext.max_bits` without deciding.

    `index` is the last index that was completed; `partial` holds whatever
    state was reached so partial results remain usable.
    """

    def __init__(self, message: str, *, index: int | None = None, partial=None):
        super().__init__(message)
        self.index = index
        self.partial = partial


class DomainError(ValueError):
    """An operation was applied outside its mathematical domain.

    Examples: dividing by an enclosure that contains zero, taking a square
    root of a possibly-negative enclosure, or seeding an expansion with a
    value outside (0, 1).
    """


class RegionViolation(ValueError):
    """A point could not be certified inside the region an operation requires."""

    def __init__(self, message: str, *, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class CrossCheckFailure(AssertionError):
    """Two independent computations of the same quantity disagree.

    This error existing is the point: disjoint enclosures from the
    definition-based and Perron-based coefficient pipelines indicate an
    implementation bug, never a precision problem.
    """
