"""Exact computations around theta lifts, Hermitian spaces and Arthur packets."""

__version__ = "0.1.0"
