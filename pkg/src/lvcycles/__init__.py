"""Certified construction of small-amplitude limit cycles in 3D competitive
Lotka–Volterra systems."""

__version__ = "0.1.0"
