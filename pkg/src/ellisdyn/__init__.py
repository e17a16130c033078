"""Executable cut calculus for externally definable sets in ordered fields."""

__version__ = "0.1.0"
