"""
Error Types
===========
Exception hierarchy shared by ingestion, mining, generation and the CLI.

All of them subclass ValueError as well, so callers that only know about
bad input can keep catching ValueError.

Exit code mapping (see cli.commands):
- ParseError   -> 1 (input could not be read)
- UsageError   -> 2 (contract violated by the caller)
- ConfigError  -> 2 (parameters cannot be satisfied)
"""

from typing import Optional


class TreeMineError(Exception):
    """Base class for every error raised on purpose by treemine."""


class ParseError(TreeMineError, ValueError):
    """
    Malformed tree or pattern text.

    Attributes:
        line_number: 1-based input line that failed, or None for single strings
    """

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class UsageError(TreeMineError, ValueError):
    """An operation was called outside its precondition."""


class ConfigError(TreeMineError, ValueError):
    """A configuration or generator profile cannot be satisfied."""
