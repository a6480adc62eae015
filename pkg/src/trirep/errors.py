from __future__ import annotations


class TrirepError(Exception):
    """Base class for every error raised by this package."""


class MalformedInputError(TrirepError, ValueError):
    """Dimension, modulus or algebra mismatch in the inputs."""


class ValidationError(TrirepError):
    """An object failed its structural validator (witness in ``args``)."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class BudgetExceeded(TrirepError):
    """An enumeration would exceed its configured budget."""


class OutOfCap(TrirepError):
    """A constructed object lies outside the inventory dimension cap."""
