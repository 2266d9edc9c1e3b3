"""Exact F2 checkers for A∞ categories, modules, cone decompositions and
the chain-level model of cobordism data."""

__version__ = "0.1.0"
