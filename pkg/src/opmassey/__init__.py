"""Exact Massey products for DG algebras over quadratic operad presentations."""

__version__ = "0.1.0"
