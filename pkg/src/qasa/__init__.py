"""Exact computer algebra for the quantum affine superalgebra U_q(sl^(M|N))."""

__version__ = "0.1.0"
