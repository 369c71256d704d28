"""Exact computations in normalized unit groups of modular group algebras of p-groups."""

__version__ = "0.1.0"
