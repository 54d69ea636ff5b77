"""Exact symbolic engine for formal FQ operations on perturbed Clifford pairs."""

__version__ = "0.1.0"
