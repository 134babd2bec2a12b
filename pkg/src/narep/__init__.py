"""Sums of four repdigits among Narayana numbers."""

__version__ = "0.1.0"
