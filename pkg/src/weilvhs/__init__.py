"""Exact constructions for Hermitian VHS of Calabi-Yau type from abelian varieties of generalized Weil type."""

__version__ = "0.1.0"
