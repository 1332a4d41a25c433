"""Exact verification of the quantitative claims in three formalized arguments."""

__version__ = "0.1.0"
