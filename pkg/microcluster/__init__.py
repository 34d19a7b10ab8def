"""Exact and numeric fidelity simulation of photonic microcluster construction and fusion."""

__version__ = "1.0.0"
