"""Exact computations with truncated equivariant map algebras and their local Weyl modules."""

__version__ = "0.1.0"
