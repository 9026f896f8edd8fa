"""Exception types shared across the package.

Each class carries a short machine-readable ``code`` used by the command
line interface when reporting failures on the diagnostic stream.
"""
from __future__ import annotations


class QsdError(Exception):
    """Base class for all package errors."""

    code = "error"


class ValidationError(QsdError, ValueError):
    """Invalid input: malformed matrices, out-of-range parameters, broken preconditions."""

    code = "invalid-input"


class DegeneracyError(ValidationError):
    """The two measures are proportional, so the log-ratio statistic is constant."""

    code = "degenerate-input"


class ResourceLimitError(QsdError, RuntimeError):
    """A hard resource cap (matrix dimension, enumeration size) would be exceeded."""

    code = "resource-limit"


class ConvergenceError(QsdError, RuntimeError):
    """An iterative routine failed to converge within its iteration budget."""

    code = "no-convergence"
