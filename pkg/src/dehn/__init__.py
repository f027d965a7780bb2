"""Combinatorial and geometric Dehn functions at desk scale."""

__version__ = "0.1.0"
