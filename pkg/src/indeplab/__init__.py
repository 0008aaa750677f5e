"""Finite-depth computations for independence sets of group actions."""

__version__ = "0.1.0"
