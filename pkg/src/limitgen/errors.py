"""Shared error types for the simulation framework."""


class LimitGenError(Exception):
    """Base class for framework errors."""


class IndexBoundExceeded(LimitGenError):
    """A search over an unbounded explicit family passed its index bound.

    Signals "unknown past the bound", not "false".
    """


class UnboundedClosureDimension(LimitGenError):
    """Arbitrarily large finite-closure sets exist; no single dimension value."""


class SearchExhausted(LimitGenError):
    """A fresh-candidate scan hit its probe cap; a precondition is violated."""


class BudgetViolation(LimitGenError):
    """A query-budgeted generator issued more queries than declared."""


class ModeMismatch(LimitGenError):
    """Generator, source, and mode are not compatible."""
