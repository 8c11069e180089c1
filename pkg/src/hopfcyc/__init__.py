"""Exact computations for Hopf-cyclic cohomology of bicrossed product Hopf algebras."""

__version__ = "0.1.0"
