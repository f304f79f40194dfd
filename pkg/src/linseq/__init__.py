"""Partial sums of heavy-tailed linear processes, their stable and fractional
limits, and oscillation diagnostics for cadlag step paths."""

__version__ = "0.1.0"
