"""Exception types shared across the package."""

from __future__ import annotations


class MclexError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(MclexError, ValueError):
    """A matrix or relation has an inadmissible shape (empty, ragged, wrong arity)."""


class VariableError(MclexError, ValueError):
    """Variable entries are missing or out of range."""


class DomainError(MclexError, ValueError):
    """An argument is outside the domain an operation is defined on."""


class ParseError(MclexError, ValueError):
    """Malformed textual input.  Carries a 1-based line and column position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class ResourceLimitError(MclexError, RuntimeError):
    """A configured resource cap was hit.  Never a silent truncation.

    Attributes record what was exhausted so callers can report or retry
    with a larger budget.
    """

    def __init__(self, message: str, *, phase: str, used: int, limit: int,
                 context: object = None):
        super().__init__(message)
        self.phase = phase
        self.used = used
        self.limit = limit
        self.context = context


class CertificateError(MclexError):
    """A derivation certificate failed to replay."""
