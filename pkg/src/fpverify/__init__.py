"""Deductive verification of floating-point programs against IEEE 754 semantics."""

__version__ = "0.1.0"
