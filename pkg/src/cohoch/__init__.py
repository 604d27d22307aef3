"""Exact homological algebra for loop-space models."""

__version__ = "0.1.0"
