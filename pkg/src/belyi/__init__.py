"""Exact bounds and certificates for the Belyi degree of number fields."""

__version__ = "0.1.0"
