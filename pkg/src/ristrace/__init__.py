"""Trace-maximizing RIS design and MIMO link capacity simulation."""

__version__ = "0.1.0"
