"""Asymptotic constants and exact values for products of factorials,
binomial and multinomial coefficients."""

__version__ = "0.1.0"
