"""Error types shared across the package.

Exit-code mapping used by the CLI: ValidationError -> 2,
ConvergenceError -> 3.
"""

from __future__ import annotations


class CavionError(Exception):
    """Base class for all package errors."""


class ValidationError(CavionError, ValueError):
    """Invalid user input or domain violation (bad quantum numbers, orders, ...)."""


class ConvergenceError(CavionError, RuntimeError):
    """A numerical procedure failed to reach its accuracy target."""


class PrecisionLossError(ConvergenceError):
    """Internal error estimate of a special-function evaluation exceeds tolerance."""
