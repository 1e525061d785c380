"""Exception types shared across the toolchain."""

from __future__ import annotations


class AdompError(Exception):
    """Base class for all toolchain errors."""


class ParseError(AdompError):
    """Syntax error with source position."""

    def __init__(self, message: str, line: int, column: int = 0):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class SemanticError(AdompError):
    """Validation error: undeclared variable, duplicate clause,
    non-canonical loop, invalid override, and similar."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class TransformError(AdompError):
    """A differentiation transform cannot handle the input."""


class RuntimeFault(AdompError):
    """Execution-time fault: tape underflow, bad index, misuse of the
    schedule recorder."""
