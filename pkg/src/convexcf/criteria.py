"""Checkers for the convergence criteria of semigroup continued fractions.

Every checker returns a :class:`ConditionReport`.  Criteria that quantify
over all n can only be confirmed for periodic term sequences; for rules
and finite lists a passing check is reported as ``horizon-limited``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

from ._num import INF
from .core import (ApproximantTrace, InvalidParameters, LipschitzProfile,
                   Semigroup, as_terms, fraction_value)
from .scalar import cf_value, upsilon

HOLDS = "holds"
FAILS = "fails"
HORIZON = "horizon-limited"
NOT_APPLICABLE = "not-applicable"


@dataclass
class ConditionReport:
    criterion: str
    parameters: dict
    verdict: str
    certificates: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "parameters": {k: _jsonable(v) for k, v in self.parameters.items()},
            "verdict": self.verdict,
            "certificates": [[n, _jsonable(w)] for n, w in self.certificates],
            "details": {k: _jsonable(v) for k, v in self.details.items()},
        }


def _jsonable(v: Any):
    if isinstance(v, (bool, str)) or v is None:
        return v
    if isinstance(v, int):
        return v
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    try:
        f = float(v)
    except (TypeError, ValueError):
        return str(v)
    if math.isinf(f):
        return "inf" if f > 0 else "-inf"
    return f


def _seq(s, i):
    return s(i) if callable(s) else s[i - 1]


def check_monotone(sg: Semigroup, trace, tol: float = 0.0) -> ConditionReport:
    """Even approximants increase and odd ones decrease in the instance order.

    This is a property of every continued fraction with terms above e, so a
    failure points at a bug in the instance operations.
    """
    zs = trace.approximants if isinstance(trace, ApproximantTrace) else list(trace)
    if len(zs) < 4:
        raise InvalidParameters("monotonicity check needs at least 4 approximants")
    bad = []
    for i in range(1, len(zs) - 2, 2):  # z_2 <= z_4 <= ...
        if not sg.leq(zs[i], zs[i + 2], tol):
            bad.append((i + 1, "even"))
    for i in range(0, len(zs) - 2, 2):  # z_1 >= z_3 >= ...
        if not sg.leq(zs[i + 2], zs[i], tol):
            bad.append((i + 1, "odd"))
    return ConditionReport("monotone", {"N": len(zs), "tol": tol},
                           FAILS if bad else HOLDS, bad)


def sandwich_bounds(r_seq, R_seq, n: int):
    """Scalar brackets [R_1, r_2, ...] <= z_n / h <= [r_1, R_2, ...].

    The last entries follow the parity rule: the lower bracket ends with r_n
    for even n and R_n for odd n, the upper one the other way round.
    """
    lower, upper = [], []
    for i in range(1, n + 1):
        r, R = _seq(r_seq, i), _seq(R_seq, i)
        if r > R:
            raise InvalidParameters(f"r_{i} = {r} exceeds R_{i} = {R}")
        lower.append(R if i % 2 else r)
        upper.append(r if i % 2 else R)
    return cf_value(lower), cf_value(upper)


def check_uniform_simple(r, R, exact_xh: bool = True) -> ConditionReport:
    """Cases (i) r > 1, (ii) r = 1 and R < inf, (iii) r < 1 and R <= r/(1-r)."""
    if not exact_xh:
        raise InvalidParameters("the simple criterion needs C == 1; use check_urr")
    if not 0 < r <= R:
        raise InvalidParameters(f"need 0 < r <= R, got r={r}, R={R}")
    case = None
    if r > 1:
        case = "i"
    elif r == 1 and R < INF:
        case = "ii"
    elif r < 1 and R <= r / (1 - r):
        case = "iii"
    return ConditionReport("uniform-simple", {"r": r, "R": R},
                           HOLDS if case else FAILS, [],
                           {"case": case, "upsilon": upsilon(r, R)})


def check_urr(r, R, profile: LipschitzProfile) -> ConditionReport:
    """C(v(R, r) / v(r, R)) / v(r, R) < 1; the quotient itself is the certificate q."""
    if not 0 < r <= R:
        raise InvalidParameters(f"need 0 < r <= R, got r={r}, R={R}")
    lo, hi = upsilon(r, R), upsilon(R, r)
    ratio = INF if hi == INF else hi / lo
    q = profile(ratio) / lo
    return ConditionReport("urr", {"r": r, "R": R, "profile": profile.name},
                           HOLDS if q < 1 else FAILS, [(0, q)],
                           {"q": q, "upsilon_rR": lo, "upsilon_Rr": hi})


def check_subk(sg: Semigroup, terms, k: int, a, b, N: int = 64,
               profile: LipschitzProfile | None = None) -> ConditionReport:
    """Window conditions x_n + [x_{n+1..n+2k}] >= a h and x_n + [x_{n+1..n+2k-1}] <= b h, C(b/a) < a.

    Certificates hold, per n, the lower bound r of the even window and the
    upper bound R of the odd window (in units of h).
    """
    if a > b:
        raise InvalidParameters(f"need a <= b, got a={a}, b={b}")
    if k < 1 or a <= 0:
        raise InvalidParameters("need k >= 1 and a > 0")
    profile = profile or sg.profile
    terms = as_terms(terms)
    if terms.mode == "periodic":
        horizon = min(N, terms.period)
    elif terms.mode == "finite":
        horizon = min(N, terms.available - 2 * k)
        if horizon < 1:
            raise InvalidParameters("not enough terms for a single window")
    else:
        horizon = N
    c = profile(INF if b == INF else b / a)
    certs, ok = [], c < a
    for n in range(1, horizon + 1):
        xs = [sg.validate(x) for x in terms.window(n, 2 * k + 1)]
        low = sg.add(xs[0], fraction_value(sg, xs[1:]))
        up = sg.add(xs[0], fraction_value(sg, xs[1:-1]))
        r_low, _ = sg.bounds(low)
        _, R_up = sg.bounds(up)
        passed = r_low >= a - 1e-12 and (b == INF or R_up <= b + 1e-12)
        ok = ok and passed
        certs.append((n, (r_low, R_up)))
    if not ok:
        verdict = FAILS
    else:
        verdict = HOLDS if terms.mode == "periodic" else HORIZON
    return ConditionReport("subk", {"k": k, "a": a, "b": b, "N": horizon},
                           verdict, certs, {"C(b/a)": c})


def variable_terms_sequence(r_seq, R_seq, profile: LipschitzProfile, N: int) -> list:
    """n log(r_n r_{n+1} / C((R_n + 1/r_{n+1}) / r_n)^2) for n = 1..N."""
    out = []
    for n in range(1, N + 1):
        r, r1, R = _seq(r_seq, n), _seq(r_seq, n + 1), _seq(R_seq, n)
        if r > R:
            raise InvalidParameters(f"r_{n} exceeds R_{n}")
        arg = INF if R == INF else (R + 1.0 / r1) / r
        c = profile(arg)
        out.append(n * math.log(r * r1 / (c * c)))
    return out


def check_variable_terms(r_seq, R_seq, profile: LipschitzProfile, N: int = 400,
                         margin: float = 0.05) -> ConditionReport:
    """liminf of the sequence above exceeds 1, judged on the last quarter of the horizon."""
    vals = variable_terms_sequence(r_seq, R_seq, profile, N)
    tail = vals[-max(8, N // 4):]
    low, high = min(tail), max(tail)
    if low > 1 + margin:
        verdict = HOLDS
    elif high < 1:
        verdict = FAILS
    else:
        verdict = HORIZON
    certs = [(N - len(tail) + 1 + i, v) for i, v in enumerate(tail)]
    return ConditionReport("variable-terms", {"N": N, "margin": margin, "profile": profile.name},
                           verdict, certs[-8:], {"trailing_inf": low, "trailing_sup": high})


def a_posteriori_error(q, k: int, r, n: int) -> float:
    """rho(z_n, z) <= q^(2(n - 2k)) / (1 - q^2) / r."""
    if not 0 < q < 1:
        raise InvalidParameters(f"need 0 < q < 1, got {q}")
    if r <= 0 or n <= 2 * k:
        raise InvalidParameters("need r > 0 and n > 2k")
    return q ** (2 * (n - 2 * k)) / ((1 - q * q) * r)


def fixed_point_residual(sg: Semigroup, z, x):
    """rho(z*, z + x); zero exactly at the limit of the constant-term fraction."""
    return sg.rho(sg.involute(z), sg.add(z, x))


def limit_distance_bound(sg: Semigroup, x1, x2, r):
    """rho(x1, x2) / (r^2 - 1), bounding the distance between the two constant-term limits."""
    if r <= 1:
        raise InvalidParameters(f"need r > 1, got {r}")
    return sg.rho(x1, x2) / (r * r - 1)


def involution_lipschitz_bound(sg: Semigroup, x, y, r, R):
    """C(R/r)^2 r^-2 rho(x, y), the bound on rho(x*, y*) when r h <= x, y <= R h."""
    c = sg.profile(INF if R == INF else R / r)
    return c * c / (r * r) * sg.rho(x, y)
