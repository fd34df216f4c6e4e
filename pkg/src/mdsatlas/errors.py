"""Exception hierarchy shared across the package."""

from __future__ import annotations


class MdsAtlasError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(MdsAtlasError, ValueError):
    """Malformed or incompatible arguments (wrong q/n/M, bad position, ...)."""


class FormatError(MdsAtlasError, ValueError):
    """Unparseable or non-canonical file content."""


class ValidationError(MdsAtlasError):
    """A structural requirement failed (not MDS, not a partition, bad seed)."""


class DependencyError(MdsAtlasError):
    """A required registry, partition set, or seed is missing."""


class SeedRequiredError(DependencyError):
    """Bootstrap at this scale needs externally supplied class representatives."""


class ConsistencyError(MdsAtlasError):
    """An exact double-counting identity failed; carries both sides."""

    def __init__(self, message: str, lhs: int | None = None, rhs: int | None = None):
        super().__init__(message)
        self.lhs = lhs
        self.rhs = rhs


class CapacityError(MdsAtlasError):
    """An enumeration would exceed a configured guardrail; resumable.

    `required` documents the size that was requested, `cap` the active limit.
    """

    def __init__(self, message: str, required: int | None = None, cap: int | None = None):
        super().__init__(message)
        self.required = required
        self.cap = cap


class LinearityUndecided(MdsAtlasError):
    """Linear-equivalence test was inconclusive at these parameters."""
