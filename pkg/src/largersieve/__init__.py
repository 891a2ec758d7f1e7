"""Larger sieve bounds and polynomial congruence counting in exact arithmetic."""

__version__ = "0.1.0"
