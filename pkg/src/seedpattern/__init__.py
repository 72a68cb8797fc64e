"""Exact-arithmetic tools for cluster-algebra seed patterns."""

__version__ = "0.1.0"
