"""Finite-level computations for index-two arboreal images of quadratic polynomials."""
__version__ = "0.1.0"
