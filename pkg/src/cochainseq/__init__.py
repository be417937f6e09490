"""Cohomology of finite p-groups with p-adic coefficients via cochain sequences."""

__version__ = "0.1.0"
