"""Exact zig-zag, monodromy and weight-filtration calculus for nodal degenerations."""
__version__ = "0.1.0"
