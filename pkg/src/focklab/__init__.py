"""Numerical verification of sharp pointwise estimates in Fock spaces."""

__version__ = "0.1.0"
