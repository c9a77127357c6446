"""Slice-by-slice computations in the polynomial model of prismatic cohomology over Q[t]/t^e."""

__version__ = "0.1.0"
