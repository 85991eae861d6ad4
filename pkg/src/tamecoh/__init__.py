"""Exact computations for mod-2 cohomology of tame blocks and their A-infinity structures."""

__version__ = "0.1.0"
