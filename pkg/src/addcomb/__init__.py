"""Additive-combinatorics quantities on finite groups."""

__version__ = "0.1.0"
