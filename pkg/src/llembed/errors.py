"""Exception types shared across the library."""

from __future__ import annotations


class LlembedError(Exception):
    """Base class for library errors.

    `stage` is filled in by the pipeline driver so callers (and the CLI)
    can tell which phase of a fit failed.
    """

    stage: str | None = None


class ParameterError(LlembedError, ValueError):
    """An argument violates a documented precondition."""


class FormatError(LlembedError, ValueError):
    """Malformed tabular input. `row`/`col` are 1-based file positions."""

    def __init__(self, message: str, row: int | None = None, col: int | None = None):
        super().__init__(message)
        self.row = row
        self.col = col


class DegenerateNeighborhoodError(LlembedError, RuntimeError):
    """Local Gram system unsolvable even after regularization."""

    def __init__(self, message: str, point: int):
        super().__init__(message)
        self.point = point


class EigensolverError(LlembedError, RuntimeError):
    """Eigensolver failed to meet the residual contract."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class UndefinedCorrelationError(LlembedError, ValueError):
    """Rank correlation requested on a constant sequence."""
