"""Exact and certified computation of explicit constants around the arithmetic
Hilbert-Samuel function of hypersurfaces and the determinant method over Q."""

__version__ = "0.1.0"
