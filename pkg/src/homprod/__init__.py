"""Homological-product CSS codes with metachecks and single-shot decoding."""

__version__ = "0.1.0"
