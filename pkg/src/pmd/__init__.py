"""Probabilistic mission design: landscapes, clearance, explanation, optimization."""

__version__ = "0.1.0"
