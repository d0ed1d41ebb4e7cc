"""
Exception types shared by the ring core, the certificate engine, the CLI and
the HTTP service.

Every error carries an ``error_type`` code and optional ``details`` so that it
can be rendered as a structured ``ErrorResponse`` without a stack trace.
"""

from typing import Any, Dict, Optional


class MakeevError(Exception):
    """Base class for all toolkit errors."""

    error_type = "MAKEEV_ERROR"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


class DomainError(MakeevError, ValueError):
    """Arguments outside the domain of an operation (caps mismatch, bad ranges)."""

    error_type = "DOMAIN_ERROR"


class ResourceLimitError(MakeevError, MemoryError):
    """A dense coefficient array would exceed the configured cell limit."""

    error_type = "RESOURCE_LIMIT"


class SpecParseError(MakeevError):
    """
    Malformed input file.

    ``details`` holds the diagnostics: ``line``/``column`` for JSON syntax
    errors, ``field`` paths for schema violations.
    """

    error_type = "PARSE_ERROR"
