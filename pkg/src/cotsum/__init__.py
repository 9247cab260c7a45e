"""Cotangent sums c0(q/p), Vasyunin sums, and the series for c0(1/p)."""

__version__ = "0.1.0"
