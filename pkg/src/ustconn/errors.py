"""Exception hierarchy shared by every module."""

from __future__ import annotations


class GraphError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(GraphError, ValueError):
    """A graph document could not be parsed.

    ``kind`` is one of ``"header"``, ``"malformed"``, ``"out_of_range"``,
    ``"count"`` or ``"order"``; ``line`` is 1-based.
    """

    def __init__(self, kind: str, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.kind = kind
        self.line = line


class DimensionError(GraphError, ValueError):
    """Two graphs have incompatible sizes for a product."""


class ParameterError(GraphError, ValueError):
    """An argument is outside the domain an operation accepts."""


class SizeCapError(GraphError):
    """An operation would exceed a configured memory or matrix cap."""


class RestrictionError(GraphError, ValueError):
    """A vertex subset is not closed under the rotation map."""


class NumericalError(GraphError, ArithmeticError):
    """The eigensolver failed to converge."""


class SearchFailure(GraphError):
    """A randomized search exhausted its attempts.

    ``best`` is the smallest measured second eigenvalue seen.
    """

    def __init__(self, message: str, best: float, tries: int):
        super().__init__(message)
        self.best = best
        self.tries = tries


class QueryLimitExceeded(GraphError):
    """Path enumeration hit its query cap before finishing."""

    def __init__(self, message: str, queries: int):
        super().__init__(message)
        self.queries = queries
