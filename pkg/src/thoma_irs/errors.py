"""Exception types shared across the package."""

from __future__ import annotations


class ConfigError(ValueError):
    """Malformed input: bad notation, width mismatch, invalid parameters."""


class CapExceeded(RuntimeError):
    """An exact computation would exceed its configured work cap."""
