"""Fukaya-Seidel categories of surface Lefschetz fibrations."""

__version__ = "0.1.0"
