"""Exact verification toolkit for Virasoro minimal model modular data."""

__version__ = "0.1.0"
