"""Numerical laboratory for branched minimal surfaces given by Weierstrass data."""

__version__ = "0.1.0"
