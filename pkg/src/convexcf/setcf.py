"""Continued fractions of planar convex sets under Minkowski addition and polarity."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from . import body2d as bd
from ._num import INF
from .body2d import Ball, ConvexBody2
from .core import (EXACT_PROFILE, ApproximantTrace, InvalidInput, InvalidParameters,
                   Semigroup, TermSequence, approximant_trace, approximants, as_terms)
from .criteria import FAILS, HOLDS, NOT_APPLICABLE, ConditionReport

STRICT_MARGIN = 1e-9


class SetSemigroup(Semigroup):
    """Closed convex sets containing 0; h is the unit disk.

    Disk values are kept as :class:`Ball` so that fractions with disk terms
    stay exact; sums of a disk and a polygon are not representable.
    """

    name = "set"
    profile = EXACT_PROFILE
    h = Ball(1.0)
    neutral = bd.point()
    top = bd.plane()

    def validate(self, x):
        if not isinstance(x, (ConvexBody2, Ball)):
            raise InvalidInput(f"set terms must be convex bodies, got {type(x).__name__}")
        return x

    def add(self, x, y):
        if _is_top(x) or _is_top(y):
            return self.top
        try:
            return bd.minkowski_sum(x, y)
        except ValueError as exc:
            raise InvalidInput(str(exc)) from None

    def involute(self, x):
        return x.polar()

    def scale(self, a, x):
        if a == INF:
            return self.top
        if a == 0:
            return self.neutral
        return x.scale(a)

    def leq(self, x, y, tol=0.0) -> bool:
        return bd.contains(y, x, tol)

    def rho(self, x, y):
        return bd.hausdorff(x, y)

    def bounds(self, x):
        return bd.inradius_centered(x), bd.norm(x)

    def norm(self, x):
        return bd.norm(x)


def _is_top(x) -> bool:
    if isinstance(x, Ball):
        return x.radius == INF
    return not x.facet_points and not x.facet_rays


SETS = SetSemigroup()


@dataclass
class SetCFProblem:
    terms: TermSequence
    tol: float = 1e-9
    max_iter: int = 100

    def __post_init__(self):
        self.terms = as_terms(self.terms)
        if self.terms.mode != "rule":
            for x in self.terms.items:
                SETS.validate(x)


def set_cf_trace(problem: SetCFProblem) -> ApproximantTrace:
    trace = approximant_trace(SETS, problem.terms, problem.max_iter, problem.tol)
    for e in trace.entries:
        if _is_top(e.z):
            trace.events.append(f"approximant {e.n} is the whole plane")
    return trace


def check_constant_theorem(K) -> ConditionReport:
    """Cases (i) r > 1, (ii) r = 1 and K compact, (iii) r < 1 and ||K|| < r/(1-r)."""
    r, R = bd.inradius_centered(K), bd.norm(K)
    compact = isinstance(K, Ball) and K.radius < INF or isinstance(K, ConvexBody2) and not K.rays
    case = None
    if r > 1:
        case = "i"
    elif r == 1 and compact:
        case = "ii"
    elif 0 < r < 1 and R < r / (1 - r):
        case = "iii"
    return ConditionReport("constant-theorem", {"r": r, "R": R},
                           HOLDS if case else FAILS, [], {"case": case})


def check_nec_suf(K, k_max: int = 20) -> ConditionReport:
    """Holds iff some odd approximant F_{2k-1} of the constant-K fraction lies in aB with a < 1."""
    if k_max < 1:
        raise InvalidParameters("k_max must be >= 1")
    try:
        zs = approximants(SETS, TermSequence.constant(K), 2 * k_max - 1)
    except InvalidInput as exc:
        return ConditionReport("nec-suf", {"k_max": k_max}, NOT_APPLICABLE, [],
                               {"reason": str(exc)})
    certs = []
    found = None
    for k in range(1, k_max + 1):
        nk = bd.norm(zs[2 * k - 2])
        certs.append((k, nk))
        if nk <= 1 - STRICT_MARGIN:
            found = k
            break
    return ConditionReport("nec-suf", {"k_max": k_max}, HOLDS if found else FAILS,
                           certs, {"k": found})


def polar_lipschitz_check(K, L, tol: float = 1e-9) -> ConditionReport:
    """rho_H(K*, L*) <= max(||K*||, ||L*||)^2 rho_H(K, L)."""
    Kp, Lp = K.polar(), L.polar()
    nk, nl = bd.norm(Kp), bd.norm(Lp)
    if nk == INF or nl == INF:
        return ConditionReport("polar-lipschitz", {}, NOT_APPLICABLE, [],
                               {"reason": "polar is unbounded"})
    lhs = bd.hausdorff(Kp, Lp)
    rhs = max(nk, nl) ** 2 * bd.hausdorff(K, L)
    ok = lhs <= rhs + tol * (1.0 + rhs)
    return ConditionReport("polar-lipschitz", {"tol": tol}, HOLDS if ok else FAILS,
                           [(0, rhs - lhs)], {"lhs": lhs, "rhs": rhs, "slack": rhs - lhs})


def parallelogram_inradius(a, b) -> float:
    """Inradius of [-a, a] + [-b, b]: |a x b| / max(|a|, |b|)."""
    cross = abs(float(a[0]) * float(b[1]) - float(a[1]) * float(b[0]))
    return cross / max(math.hypot(*map(float, a)), math.hypot(*map(float, b)))


def _centred_segment(v) -> ConvexBody2:
    return bd.segment((-v[0], -v[1]), v)


def _kernel_identity_error(v1, v2) -> float:
    """rho_H((S_1 + S_2*)*, S_2 / (1 + |<v1, v2>|)) for the centred segments S_i = [-v_i, v_i]."""
    s1, s2 = _centred_segment(v1), _centred_segment(v2)
    lhs = (s1 + s2.polar()).polar()
    c = 1.0 / (1.0 + abs(float(v1[0]) * float(v2[0]) + float(v1[1]) * float(v2[1])))
    return bd.hausdorff(lhs, s2.scale(c))


def three_segment_condition(u1, u2, u3) -> ConditionReport:
    """Window condition for the 3-periodic fraction of centred segments [-u_i, u_i].

    For every ordering (i1, i2, i3) the window set is the parallelogram
    [-u_i1, u_i1] + [-u_i3, u_i3] / (1 + |<u_i2, u_i3>|); the condition holds
    when the smallest of these inradii exceeds 1.
    """
    us = [tuple(float(c) for c in u) for u in (u1, u2, u3)]
    for a, b in itertools.combinations(us, 2):
        if abs(a[0] * b[1] - a[1] * b[0]) <= 1e-12 * (1 + math.hypot(*a) * math.hypot(*b)):
            raise InvalidParameters("segments must be pairwise non-collinear")
    certs, worst = [], INF
    for i1, i2, i3 in itertools.permutations(range(3)):
        c = 1.0 / (1.0 + abs(us[i2][0] * us[i3][0] + us[i2][1] * us[i3][1]))
        r = parallelogram_inradius(us[i1], (c * us[i3][0], c * us[i3][1]))
        certs.append(((i1, i2, i3), r))
        worst = min(worst, r)
    identity = max(_kernel_identity_error(a, b) for a, b in itertools.permutations(us, 2))
    return ConditionReport("three-segments", {"u": us}, HOLDS if worst > 1 + STRICT_MARGIN else FAILS,
                           certs, {"max_a": worst, "identity_error": identity})


def segments_at_120(L: float):
    return [(L * math.cos(2 * math.pi * j / 3), L * math.sin(2 * math.pi * j / 3)) for j in range(3)]


def three_segment_threshold(lo: float = 0.01, hi: float = 100.0, samples: int = 400,
                            iters: int = 60):
    """Smallest length L at 120 degree spacing with the condition holding, or None.

    A log-spaced scan brackets the first passing length, then bisection
    refines it.  Returns ``(L_star, best)`` where ``best`` is the largest
    window inradius seen in the scan.
    """
    grid = [lo * (hi / lo) ** (i / (samples - 1)) for i in range(samples)]
    best, first, prev = (0.0, None), None, lo
    for L in grid:
        a = three_segment_condition(*segments_at_120(L)).details["max_a"]
        if a > best[0]:
            best = (a, L)
        if a > 1 + STRICT_MARGIN:
            first = L
            break
        prev = L
    if first is None:
        return None, best
    a_, b_ = prev, first
    for _ in range(iters):
        m = 0.5 * (a_ + b_)
        if three_segment_condition(*segments_at_120(m)).holds:
            b_ = m
        else:
            a_ = m
    return b_, best


def periodic_two_condition(K, L) -> ConditionReport:
    """Inradii of K + (L + K*)* and L + (K + L*)* must both exceed 1."""
    try:
        w1 = SETS.add(K, SETS.involute(SETS.add(L, SETS.involute(K))))
        w2 = SETS.add(L, SETS.involute(SETS.add(K, SETS.involute(L))))
    except InvalidInput as exc:
        return ConditionReport("periodic-two", {}, NOT_APPLICABLE, [], {"reason": str(exc)})
    r1, r2 = bd.inradius_centered(w1), bd.inradius_centered(w2)
    ok = r1 > 1 + STRICT_MARGIN and r2 > 1 + STRICT_MARGIN
    return ConditionReport("periodic-two", {}, HOLDS if ok else FAILS, [(1, r1), (2, r2)],
                           {"r1": r1, "r2": r2})


@dataclass
class ScalingRow:
    t: float
    z: object
    scaled: object
    norm: float
    dist_x: float
    dist_xstar: float
    converged: bool
    notes: list = field(default_factory=list)


def fixed_point_scaling(K, t_grid, beta: float = 1.0, N: int = 200, tol: float = 1e-10) -> list:
    """Limits z_t of the constant-term fraction with term tK, scaled by t^beta.

    Each row reports the distance of t^beta z_t to both K and K*, the two
    candidate limits as t grows.
    """
    Kp = K.polar()
    rows = []
    for t in t_grid:
        if t < 1:
            raise InvalidParameters("scaling grid must have t >= 1")
        tK = SETS.scale(t, K)
        notes = []
        if not check_constant_theorem(tK).holds:
            notes.append("constant-term condition fails")
        tr = approximant_trace(SETS, TermSequence.constant(tK), N, tol)
        z = tr.entries[-1].z
        scaled = SETS.scale(t ** beta, z)
        rows.append(ScalingRow(t, z, scaled, bd.norm(scaled), bd.hausdorff(scaled, K),
                               bd.hausdorff(scaled, Kp), tr.verdict == "converged", notes))
    return rows
