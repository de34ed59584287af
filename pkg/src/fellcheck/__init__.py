"""Executable checks for Fell bundles, graded C*-algebras and the Cuntz-Krieger bundle."""

__version__ = "0.1.0"
