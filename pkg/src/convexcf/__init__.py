"""Continued fractions on ordered semigroups with an order-reversing involution.

Instances: nonnegative extended reals (``scalar``), planar convex sets under
Minkowski addition and polarity (``setcf``), and convex functions on the line
under the Legendre-Fenchel conjugate or the A-transform (``fn1d``).
"""
from .core import (ApproximantTrace, InvalidInput, InvalidParameters, LipschitzProfile,
                   Semigroup, TermSequence, approximant, approximant_trace, approximants,
                   dual_add, fraction_value)
from .criteria import ConditionReport

__all__ = [
    "ApproximantTrace", "ConditionReport", "InvalidInput", "InvalidParameters",
    "LipschitzProfile", "Semigroup", "TermSequence", "approximant", "approximant_trace",
    "approximants", "dual_add", "fraction_value",
]
