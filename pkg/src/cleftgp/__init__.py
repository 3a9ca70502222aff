"""Modules over theta-extension rings and Gorenstein projectivity checks."""

__version__ = "0.1.0"
