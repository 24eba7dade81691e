"""Exact-arithmetic toolkit for Tortken / Novikov-Jordan algebras."""

__version__ = "0.1.0"
