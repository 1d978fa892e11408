"""Proof kernel for differential-algebraic dynamic logic."""

__version__ = "0.1.0"
