"""Exact kernel for quantum sl(2|1) at roots of unity."""
from .scalar import Cyc, Rational, RootConfig

__all__ = ["Cyc", "Rational", "RootConfig"]
