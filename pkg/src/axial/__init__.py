"""Exact computations with primitive axial algebras of Jordan type one half."""

__version__ = "0.1.0"
