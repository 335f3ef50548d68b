"""Cohomological dimension of groups acting with a strict fundamental domain."""

__version__ = "0.1.0"
