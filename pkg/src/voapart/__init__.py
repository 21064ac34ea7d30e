"""Exact genus-g partition functions of Heisenberg and lattice vertex operator algebras."""

__version__ = "0.1.0"
