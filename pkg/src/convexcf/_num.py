"""Numeric helpers shared by the exact (Fraction) and binary64 code paths.

Values are plain Python numbers.  ``int`` and ``Fraction`` are treated as
exact and compared without tolerance; anything else is compared with an
absolute tolerance scaled by the magnitude of the operands.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

INF = math.inf
EPS = 1e-9


def is_exact(*xs) -> bool:
    return all(isinstance(x, Rational) for x in xs)


def sign(x, scale=1.0) -> int:
    """Sign of ``x``; float values within ``EPS * scale`` of zero count as zero."""
    if isinstance(x, Rational):
        return (x > 0) - (x < 0)
    if x > EPS * scale:
        return 1
    if x < -EPS * scale:
        return -1
    return 0


def inv(x):
    """Extended inverse on [0, inf]: 1/0 = inf, 1/inf = 0."""
    if x == 0:
        return INF
    if x == INF:
        return Fraction(0)
    if isinstance(x, Rational):
        return Fraction(1) / x
    return 1.0 / x


def exact_sqrt(x):
    """Square root that stays a Fraction when ``x`` is a rational square."""
    if isinstance(x, Rational) and x >= 0:
        x = Fraction(x)
        n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
        if n * n == x.numerator and d * d == x.denominator:
            return Fraction(n, d)
    return math.sqrt(x)


def parse_number(v):
    """JSON number or string to a number.  Integers and "p/q" strings stay exact."""
    if isinstance(v, bool):
        raise ValueError(f"not a number: {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        return v
    if isinstance(v, str):
        s = v.strip().lower()
        if s in ("inf", "+inf", "infinity"):
            return INF
        if s in ("-inf", "-infinity"):
            return -INF
        try:
            return Fraction(s)
        except ValueError:
            return float(s)
    raise ValueError(f"not a number: {v!r}")


def fmt(x) -> str:
    """Serialise a number for CSV/JSON output (inf as "inf")."""
    if x is None:
        return "nan"
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    if x == INF:
        return "inf"
    if x == -INF:
        return "-inf"
    return repr(float(x))
