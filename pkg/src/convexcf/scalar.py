"""The extended half-line [0, inf] with addition and x* = 1/x."""
from __future__ import annotations

import math
from fractions import Fraction

from ._num import INF, inv
from .core import (EXACT_PROFILE, InvalidInput, Semigroup, TermSequence,
                   approximants, as_terms, classify)


class ScalarSemigroup(Semigroup):
    name = "scalar"
    profile = EXACT_PROFILE
    h = 1.0
    neutral = Fraction(0)
    top = INF

    def validate(self, x):
        if x != x or x < 0:
            raise InvalidInput(f"scalar terms must lie in [0, inf], got {x}")
        return x

    def add(self, x, y):
        if x == INF or y == INF:
            return INF
        return x + y

    def involute(self, x):
        return inv(x)

    def scale(self, a, x):
        if x == INF:
            return INF
        return a * x

    def leq(self, x, y, tol=0.0) -> bool:
        if y == INF:
            return True
        if x == INF:
            return False
        return x <= y + tol

    def rho(self, x, y):
        if x == INF or y == INF:
            return 0.0 if x == y else INF
        return abs(x - y)

    def bounds(self, x):
        return x, x


SCALAR = ScalarSemigroup()


def cf_value(bs) -> float:
    """[b_1, ..., b_n] = 1/(b_1 + 1/(b_2 + ... + 1/b_n)) on [0, inf]."""
    bs = list(bs)
    if not bs:
        raise InvalidInput("need at least one term")
    z = inv(bs[-1])
    for b in reversed(bs[:-1]):
        z = inv(SCALAR.add(b, z))
    return z


def upsilon(r, R) -> float:
    """Inverse of the periodic fraction [r, R, r, R, ...]: (sqrt(r^2 + 4r/R) + r) / 2."""
    if not r > 0:
        raise InvalidInput(f"upsilon needs r > 0, got {r}")
    if r == INF:
        return INF
    if R == INF:
        return float(r)
    r, R = float(r), float(R)
    return 0.5 * (math.sqrt(r * r + 4.0 * r / R) + r)


def periodic_limit(r, R) -> float:
    """Limit of [r, R, r, R, ...]."""
    return 1.0 / upsilon(r, R)


def scalar_cf(b_seq, n: int):
    """nth approximant of the numerical fraction generated by b_seq (list, cycle or rule)."""
    terms = as_terms(b_seq)
    return cf_value(terms.window(1, n))


def seidel_stern_verdict(b_seq, N: int = 200, tol: float = 1e-9):
    """Classify a nonnegative-term fraction by the divergence of its term sum.

    A cycle with a positive term has an infinite sum, so the verdict is exact.
    For finite lists and rules only a horizon is visible: the sum is judged
    divergent when its second-half increment S_N - S_{N/2} exceeds 0.1, and
    the verdict is ``horizon-limited`` with that prediction attached.
    """
    from .criteria import HOLDS, FAILS, HORIZON, ConditionReport

    terms = as_terms(b_seq)
    if terms.mode == "finite":
        N = min(N, len(terms.items))
    bs = [SCALAR.validate(b) for b in terms.window(1, N)]
    zs = approximants(SCALAR, TermSequence.finite(bs), N)
    partial = sum(bs)
    half = sum(bs[: N // 2])
    gap = abs(zs[-1] - zs[-2]) if N >= 2 else INF
    trend, _ = classify(SCALAR, zs, [SCALAR.rho(a, b) for a, b in zip(zs, zs[1:])] + [None], tol)
    details = {"partial_sum": partial, "tail_increment": partial - half,
               "even_odd_gap": gap, "trace_verdict": trend}
    if terms.mode == "periodic":
        verdict = HOLDS if any(b > 0 for b in terms.items) else FAILS
        details["prediction"] = "converges" if verdict == HOLDS else "diverges"
    else:
        verdict = HORIZON
        details["prediction"] = "converges" if partial - half > 0.1 or partial == INF else "diverges"
    return ConditionReport("seidel-stern", {"N": N}, verdict, [(N, gap)], details)
