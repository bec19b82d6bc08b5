"""Enumeration and analysis of conic-line arrangements with one conic."""

__version__ = "0.1.0"
