"""Maslov-type indices for symplectic paths and brake orbits."""

__version__ = "0.1.0"
