"""Limits of triangular digraph algebras: towers, ideals, spectra and lexicographic classification."""

__version__ = "0.1.0"
