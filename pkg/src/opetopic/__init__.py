"""Symmetric and generalised multicategories, symmetrisation, slicing,
opetopes and multitopes."""

__version__ = "0.1.0"
