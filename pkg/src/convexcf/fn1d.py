"""Nonnegative convex functions on the line vanishing at 0.

Functions are piecewise linear-quadratic: finitely many pieces
``a x^2 + b x + c`` (``a >= 0``) on a closed interval domain, ``+inf``
outside.  This family is closed under addition, the Legendre-Fenchel
conjugate and inf-convolution, and contains ``h(x) = x^2 / 2`` exactly,
so the conjugate-based instance runs without sampling error.  The
A-transform is implemented for the piecewise linear subfamily, which it
maps to itself.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from ._num import EPS, INF, exact_sqrt, is_exact
from .core import InvalidInput, InvalidParameters, LipschitzProfile, Semigroup
from .criteria import FAILS, HOLDS, NOT_APPLICABLE, ConditionReport

ZERO_PIECE = (Fraction(0), Fraction(0), Fraction(0))


def _num(x):
    if isinstance(x, bool):
        raise InvalidInput("boolean is not a number")
    if isinstance(x, int):
        return Fraction(x)
    return x


def _inv(x):
    return Fraction(1) / x if is_exact(x) else 1.0 / x


def _coeff_eq(p, q) -> bool:
    if is_exact(*p, *q):
        return p == q
    return all(abs(x - y) <= EPS * (1.0 + max(abs(x), abs(y))) for x, y in zip(p, q))


def _val(pc, x):
    a, b, c = pc
    return (a * x + b) * x + c


def _mid(s, e):
    if s == -INF and e == INF:
        return Fraction(0)
    if s == -INF:
        return e - 1
    if e == INF:
        return s + 1
    return (s + e) / 2


@dataclass(frozen=True)
class ConvexFn1:
    """``f = a_i x^2 + b_i x + c_i`` on ``[t_{i-1}, t_i]`` with ``t_0 = lo``, ``t_m = hi``."""

    lo: Any
    hi: Any
    knots: tuple
    pieces: tuple

    # -- structure ----------------------------------------------------------

    @property
    def breaks(self) -> tuple:
        return (self.lo, *self.knots, self.hi)

    def segments(self):
        T = self.breaks
        return [(T[i], T[i + 1], pc) for i, pc in enumerate(self.pieces)]

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    @property
    def is_pl(self) -> bool:
        return all(pc[0] == 0 for pc in self.pieces)

    @property
    def exact(self) -> bool:
        vals = [c for pc in self.pieces for c in pc] + [t for t in self.breaks if abs(t) != INF]
        return is_exact(*vals)

    def piece_at(self, x):
        i = bisect.bisect_right(self.knots, x)
        return self.pieces[min(i, len(self.pieces) - 1)]

    def __call__(self, x):
        if x < self.lo or x > self.hi:
            return INF
        return _val(self.piece_at(x), x)

    def slope(self, x, side: int):
        """One-sided derivative at x (side -1 left, +1 right); inf outside the domain."""
        if side > 0 and x >= self.hi:
            return INF
        if side < 0 and x <= self.lo:
            return -INF
        T = self.breaks
        i = bisect.bisect_right(self.knots, x) if side > 0 else bisect.bisect_left(self.knots, x)
        a, b, _ = self.pieces[i]
        if abs(x) == INF:
            return b if a == 0 else math.copysign(INF, x)
        return 2 * a * x + b

    def __add__(self, other: "ConvexFn1") -> "ConvexFn1":
        return add(self, other)

    def __repr__(self) -> str:
        segs = ", ".join(f"[{_fmt(s)}, {_fmt(e)}]: {tuple(_fmt(c) for c in pc)}"
                         for s, e, pc in self.segments())
        return f"ConvexFn1({segs})"

    # -- checks -------------------------------------------------------------

    def check(self, tol: float = 1e-9) -> "ConvexFn1":
        """Raise InvalidInput unless f is convex, continuous, f(0) = 0 and f >= 0."""
        if not self.lo <= 0 <= self.hi:
            raise InvalidInput("domain must contain 0")
        if len(self.pieces) != len(self.knots) + 1:
            raise InvalidInput("need one piece per interval")
        if any(pc[0] < 0 for pc in self.pieces):
            raise InvalidInput("pieces must be convex (a >= 0)")
        ex = self.exact
        for i, t in enumerate(self.knots):
            left, right = _val(self.pieces[i], t), _val(self.pieces[i + 1], t)
            if (left != right) if ex else abs(left - right) > tol * (1 + abs(left)):
                raise InvalidInput(f"discontinuity at knot {t}")
            sl, sr = 2 * self.pieces[i][0] * t + self.pieces[i][1], 2 * self.pieces[i + 1][0] * t + self.pieces[i + 1][1]
            if sl > sr + (0 if ex else tol * (1 + abs(sl))):
                raise InvalidInput(f"slopes decrease at knot {t}")
        f0 = self(Fraction(0))
        if (f0 != 0) if ex else abs(f0) > tol:
            raise InvalidInput("f(0) must be 0")
        if not self.is_point:
            sl, sr = self.slope(0, -1), self.slope(0, 1)
            if sl > (0 if ex else tol) or sr < (0 if ex else -tol):
                raise InvalidInput("0 must minimize f (f >= 0)")
        return self


def _fmt(x) -> str:
    if x == INF:
        return "inf"
    if x == -INF:
        return "-inf"
    return str(x) if isinstance(x, Fraction) else f"{x:.6g}"


def _make(lo, hi, segs, point_value=None) -> ConvexFn1:
    """Canonical form: zero-length pieces dropped, equal neighbours merged."""
    if lo == hi:
        v = point_value if point_value is not None else Fraction(0)
        return ConvexFn1(lo, hi, (), ((Fraction(0), Fraction(0), v),))
    out = []
    for s, e, pc in segs:
        if not e > s:
            continue
        if abs(s) != INF and abs(e) != INF and not is_exact(s, e) and e - s <= EPS * (1 + abs(s)):
            continue
        if out and _coeff_eq(out[-1][2], pc):
            out[-1] = (out[-1][0], e, out[-1][2])
        else:
            out.append((s, e, pc))
    if not out:
        raise InvalidInput("function has no pieces")
    knots = tuple(s for s, _, _ in out[1:])
    return ConvexFn1(lo, hi, knots, tuple(pc for _, _, pc in out))


# -- constructors ---------------------------------------------------------------

def zero() -> ConvexFn1:
    return ConvexFn1(-INF, INF, (), (ZERO_PIECE,))


def indicator(lo=0, hi=0) -> ConvexFn1:
    """0 on [lo, hi], +inf outside; ``indicator()`` is the top element."""
    lo, hi = _num(lo), _num(hi)
    if not lo <= 0 <= hi:
        raise InvalidInput("indicator interval must contain 0")
    return _make(lo, hi, [(lo, hi, ZERO_PIECE)])


def quadratic(c=1) -> ConvexFn1:
    """``c x^2 / 2``; ``quadratic(1)`` is the self-polar h."""
    c = _num(c)
    if c < 0:
        raise InvalidInput("quadratic coefficient must be >= 0")
    return ConvexFn1(-INF, INF, (), ((c / 2, c * 0, c * 0),))


def pl(points, left_slope=None, right_slope=None) -> ConvexFn1:
    """Piecewise linear interpolation of ``points`` [(x, f(x)), ...].

    Outside the first/last point f continues with ``left_slope`` /
    ``right_slope``; ``INF`` (or None) there ends the domain at that point.
    """
    pts = sorted((_num(x), _num(y)) for x, y in points)
    if not pts:
        raise InvalidInput("need at least one point")
    xs = [x for x, _ in pts]
    if len(set(xs)) != len(xs):
        raise InvalidInput("duplicate x in points")
    segs = []
    if left_slope is not None and abs(left_slope) != INF:
        s = _num(left_slope)
        segs.append((-INF, xs[0], (s * 0, s, pts[0][1] - s * xs[0])))
        lo = -INF
    else:
        lo = xs[0]
    for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
        s = (y1 - y0) / (x1 - x0)
        segs.append((x0, x1, (s * 0, s, y0 - s * x0)))
    if right_slope is not None and abs(right_slope) != INF:
        s = _num(right_slope)
        segs.append((xs[-1], INF, (s * 0, s, pts[-1][1] - s * xs[-1])))
        hi = INF
    else:
        hi = xs[-1]
    if lo == hi:
        return _make(lo, hi, [], pts[0][1]).check()
    return _make(lo, hi, segs).check()


def abs_fn(c=1) -> ConvexFn1:
    c = _num(c)
    return pl([(0, 0)], -c, c)


@dataclass(frozen=True)
class SampledFn:
    """A function with the sup-norm error of its sampling on ``[-extent, extent]``."""

    fn: ConvexFn1
    bound: float
    p: float
    extent: float


def h_p_constant(p) -> float:
    if p == 1:
        return 1.0
    p = float(p)
    return math.sqrt((p - 1) ** (p - 1) / p ** p)


def h_p_exact(p, x) -> float:
    return h_p_constant(p) * abs(float(x)) ** float(p)


def h_p_construct(p, grid: int = 2000, extent: float = 8.0) -> SampledFn:
    """h_p(x) = k_p |x|^p with k_p = ((p-1)^(p-1) / p^p)^(1/2).

    p = 1 and p = 2 are represented exactly.  Otherwise h_p is linearly
    interpolated on 2*grid + 1 uniform nodes of [-extent, extent] and
    continued by the last chord; ``bound`` is the largest chord excess over
    h_p inside [-extent, extent], computed per cell in closed form.
    """
    if p < 1:
        raise InvalidParameters(f"h_p needs p >= 1, got {p}")
    if p == 1:
        return SampledFn(abs_fn(1), 0.0, 1.0, INF)
    if p == 2:
        return SampledFn(quadratic(1), 0.0, 2.0, INF)
    k, p = h_p_constant(p), float(p)
    xs = [extent * i / grid for i in range(grid + 1)]
    ys = [k * x ** p for x in xs]
    bound = 0.0
    for (u, fu), (v, fv) in zip(zip(xs, ys), zip(xs[1:], ys[1:])):
        s = (fv - fu) / (v - u)
        y = (s / (k * p)) ** (1.0 / (p - 1))
        bound = max(bound, fu + s * (y - u) - k * y ** p)
    pts = [(-x, y) for x, y in zip(xs[1:], ys[1:])] + list(zip(xs, ys))
    s_end = (ys[-1] - ys[-2]) / (xs[-1] - xs[-2])
    return SampledFn(pl(pts, -s_end, s_end), bound, p, extent)


# -- algebra ----------------------------------------------------------------------

def _refine(fns, extra=()):
    """Common refinement of the domains: [(s, e, [piece of each f])]."""
    lo = max(f.lo for f in fns)
    hi = min(f.hi for f in fns)
    if lo > hi:
        raise InvalidInput("domains do not intersect")
    cuts = {lo, hi}
    for f in fns:
        cuts.update(t for t in f.knots if lo < t < hi)
    cuts.update(t for t in extra if lo < t < hi)
    cuts = sorted(cuts)
    out = []
    for s, e in zip(cuts, cuts[1:]):
        m = _mid(s, e)
        out.append((s, e, [f.piece_at(m) for f in fns]))
    return lo, hi, out


def add(f: ConvexFn1, g: ConvexFn1) -> ConvexFn1:
    lo, hi, segs = _refine([f, g])
    if lo == hi:
        return _make(lo, hi, [], f(lo) + g(lo))
    return _make(lo, hi, [(s, e, tuple(x + y for x, y in zip(p, q))) for s, e, (p, q) in segs])


def scale_values(a, f: ConvexFn1) -> ConvexFn1:
    """Pointwise a f."""
    a = _num(a)
    if a == INF:
        return indicator()
    if a == 0:
        return zero()
    if f.is_point:
        return _make(f.lo, f.hi, [], a * f(f.lo))
    return _make(f.lo, f.hi, [(s, e, tuple(a * c for c in pc)) for s, e, pc in f.segments()])


def compose_scale(s, f: ConvexFn1) -> ConvexFn1:
    """x -> f(s x) for s > 0."""
    s = _num(s)
    if s <= 0:
        raise InvalidParameters("composition scale must be positive")
    si = _inv(s)

    def m(t):
        return t if abs(t) == INF else t * si

    if f.is_point:
        return _make(m(f.lo), m(f.hi), [], f(f.lo))
    return _make(m(f.lo), m(f.hi),
                 [(m(a), m(b), (pc[0] * s * s, pc[1] * s, pc[2])) for a, b, pc in f.segments()])


def legendre(f: ConvexFn1) -> ConvexFn1:
    """f*(s) = sup_x (s x - f(x)).

    Quadratic pieces map to quadratic pieces over their slope range, kinks
    and finite domain ends map to affine pieces over their subdifferentials,
    affine pieces map to kinks.
    """
    if f.is_point:
        p, v = f.lo, f(f.lo)
        return _make(-INF, INF, [(-INF, INF, (p * 0, p, -v))])
    segs = []
    T = f.breaks
    m = len(f.pieces)
    sl = [f.slope(T[i], 1) if abs(T[i]) != INF else _tail_slope(f.pieces[i], T[i]) for i in range(m)]
    sr = [f.slope(T[i + 1], -1) if abs(T[i + 1]) != INF else _tail_slope(f.pieces[i], T[i + 1])
          for i in range(m)]
    if f.lo != -INF:
        segs.append((-INF, sl[0], (Fraction(0), f.lo, -f(f.lo))))
    for i, (a, b, c) in enumerate(f.pieces):
        if a > 0:
            ia = _inv(4 * a)
            segs.append((sl[i], sr[i], (ia, -2 * b * ia, b * b * ia - c)))
        if i + 1 < m and sr[i] < sl[i + 1]:
            t = T[i + 1]
            segs.append((sr[i], sl[i + 1], (Fraction(0), t, -f(t))))
    if f.hi != INF:
        segs.append((sr[-1], INF, (Fraction(0), f.hi, -f(f.hi))))
    segs = [sg for sg in segs if sg[1] > sg[0]]
    if not segs:
        b, c = f.pieces[0][1], f.pieces[0][2]
        return _make(b, b, [], -c)
    return _make(segs[0][0], segs[-1][1], segs)


def _tail_slope(pc, x):
    a, b, _ = pc
    return b if a == 0 else math.copysign(INF, x)


def inf_conv(f: ConvexFn1, g: ConvexFn1) -> ConvexFn1:
    """(f # g)(x) = inf_{y} f(y) + g(x - y), computed as (f* + g*)*."""
    return legendre(add(legendre(f), legendre(g)))


# -- ratios against a reference function -----------------------------------------

def _w_interval(p, q):
    """Image of the x-interval [p, q] (not straddling 0) under w = 1/x."""
    def inv(x, pos):
        if x == 0:
            return INF if pos else -INF
        if abs(x) == INF:
            return Fraction(0)
        return _inv(x)

    pos = p >= 0
    return inv(q, pos), inv(p, pos)


def _poly_range(A, B, C, w1, w2):
    """min and max of A + B w + C w^2 over [w1, w2], limits at infinite ends."""
    vals = []
    for w in (w1, w2):
        if abs(w) == INF:
            if C != 0:
                vals.append(INF if C > 0 else -INF)
            elif B != 0:
                vals.append(INF if (B > 0) == (w > 0) else -INF)
            else:
                vals.append(A)
        else:
            vals.append(A + (B + C * w) * w)
    if C != 0:
        ws = -B / (2 * C)
        if w1 < ws < w2:
            vals.append(A + (B + C * ws) * ws)
    return min(vals), max(vals)


def _mobius_range(d, hpc, p, q):
    """min and max of (b x + c) / (m x + n) over [p, q]; monotone, so only ends matter."""
    _, b, c = d
    _, mm, nn = hpc
    vals = []
    for x in (p, q):
        if abs(x) == INF:
            if mm != 0:
                vals.append(b / mm)
            elif b != 0:
                vals.append(INF if (b > 0) == (x > 0) else -INF)
            else:
                vals.append(c / nn)
        elif x == 0 and nn == 0:
            if c != 0:
                vals.append(INF if c > 0 else -INF)
            else:
                vals.append(b / mm)
        else:
            vals.append((b * x + c) / (mm * x + nn))
    return min(vals), max(vals)


def _clean(d, touches_zero, exact, scale):
    if exact or not touches_zero:
        return d
    a, b, c = d
    tiny = 1e-11 * (1 + scale)
    if abs(c) <= tiny:
        c = 0.0
        if abs(b) <= tiny:
            b = 0.0
    return (a, b, c)


def _ratio_ranges(f: ConvexFn1, g: ConvexFn1, h: ConvexFn1):
    """Per-interval (min, max) of (f - g) / h over the common domain, x != 0."""
    if h.lo != -INF or h.hi != INF:
        raise InvalidParameters("reference function must be finite everywhere")
    lo, hi, segs = _refine([f, g, h], extra=(Fraction(0),))
    exact = f.exact and g.exact and h.exact
    out = []
    for s, e, (pf, pg, ph) in segs:
        d = tuple(x - y for x, y in zip(pf, pg))
        scale = max(abs(c) for c in pf + pg)
        d = _clean(d, s == 0 or e == 0, exact, scale)
        if ph[0] > 0 and ph[1] == 0 and ph[2] == 0:
            ia = _inv(ph[0])
            out.append(_poly_range(d[0] * ia, d[1] * ia, d[2] * ia, *_w_interval(s, e)))
        elif ph[0] == 0:
            if d[0] != 0:
                raise InvalidParameters("quadratic pieces against a piecewise linear reference")
            out.append(_mobius_range(d, ph, s, e))
        else:
            raise InvalidParameters("reference must be piecewise linear or c x^2 near every point")
    return lo, hi, out


H = quadratic(1)


def rho_wrt(f: ConvexFn1, g: ConvexFn1, h: ConvexFn1 = H):
    """inf{t : f <= g + t h, g <= f + t h}."""
    if f.lo != g.lo or f.hi != g.hi:
        return INF
    if f.is_point:
        return 0.0
    _, _, rs = _ratio_ranges(f, g, h)
    return max([max(abs(a), abs(b)) for a, b in rs] + [0])


def rho_h(f: ConvexFn1, g: ConvexFn1):
    """The metric built from h = x^2 / 2."""
    return rho_wrt(f, g, H)


def leq_wrt(f: ConvexFn1, g: ConvexFn1, h: ConvexFn1 = H, tol=0.0) -> bool:
    """Whether f <= g + tol h pointwise."""
    if g.lo < f.lo or g.hi > f.hi:
        return False
    if g.is_point:
        return True
    _, _, rs = _ratio_ranges(f, g, h)
    slack = 0.0 if (f.exact and g.exact and h.exact) else 1e-9
    return all(b <= tol + slack for _, b in rs)


@dataclass(frozen=True)
class QuadBounds:
    r: Any
    R: Any


def ratio_bounds(f: ConvexFn1, h: ConvexFn1 = H) -> QuadBounds:
    """Extremes r, R of f / h over x != 0 (f = +inf counts as inf)."""
    if f.is_point:
        return QuadBounds(INF, INF)
    _, _, rs = _ratio_ranges(f, zero(), h)
    r = min(a for a, _ in rs)
    R = max(b for _, b in rs)
    if f.lo != -INF or f.hi != INF:
        R = INF
    return QuadBounds(r, R)


def quad_bounds(f: ConvexFn1) -> QuadBounds:
    """r, R with r x^2 / 2 <= f(x) <= R x^2 / 2."""
    return ratio_bounds(f, H)


# -- the A-transform --------------------------------------------------------------

def zero_set(f: ConvexFn1):
    """The interval f^{-1}(0)."""
    z1 = z2 = Fraction(0)
    for s, e, pc in f.segments():
        if pc[0] == 0 and pc[1] == 0 and pc[2] == 0:
            if s <= 0 <= e or s == z2:
                z2 = max(z2, e)
    for s, e, pc in reversed(f.segments()):
        if pc[0] == 0 and pc[1] == 0 and pc[2] == 0:
            if s <= 0 <= e or e == z1:
                z1 = min(z1, s)
    return z1, z2


def _upper_envelope(lines, lo, hi):
    """max of lines (m, k) restricted to [lo, hi], as (s, e, piece) segments."""
    lines = sorted(set(lines))
    hull = []
    for m, k in lines:
        if hull and hull[-1][0] == m:
            hull.pop()
        while len(hull) >= 2:
            (m1, k1), (m2, k2) = hull[-2], hull[-1]
            # drop the middle line when it never rises above the outer two
            if (k2 - k1) * (m - m2) <= (k - k2) * (m2 - m1):
                hull.pop()
            else:
                break
        hull.append((m, k))
    xs = [(hull[i][1] - hull[i + 1][1]) / (hull[i + 1][0] - hull[i][0]) for i in range(len(hull) - 1)]
    bounds = [-INF, *xs, INF]
    segs = []
    for (m, k), s, e in zip(hull, bounds, bounds[1:]):
        s, e = max(s, lo), min(e, hi)
        if e > s:
            segs.append((s, e, (m * 0, m, k)))
    return segs


def a_transform(f: ConvexFn1) -> ConvexFn1:
    """f^o(x) = sup{(x y - 1) / f(y) : f(y) > 0} on the polar of the zero set, +inf outside.

    For piecewise linear f the map y -> (x y - 1) / f(y) is monotone on every
    piece, so the supremum is a maximum over knots, domain ends and the
    asymptotic slopes, i.e. over finitely many affine functions of x.
    """
    if not f.is_pl:
        raise InvalidInput("the A-transform is implemented for piecewise linear functions")
    z1, z2 = zero_set(f)
    p1 = -INF if z1 == 0 else (Fraction(0) if z1 == -INF else _inv(z1))
    p2 = INF if z2 == 0 else (Fraction(0) if z2 == INF else _inv(z2))
    if p1 == p2:
        return indicator()
    one = Fraction(1)
    lines = []
    for y in set(f.breaks):
        if abs(y) == INF:
            continue
        v = f(y)
        if v > 0:
            iv = _inv(v)
            lines.append((y * iv, -one * iv))
    if f.lo == -INF and f.pieces[0][1] < 0:
        lines.append((_inv(f.pieces[0][1]), Fraction(0)))
    if f.hi == INF and f.pieces[-1][1] > 0:
        lines.append((_inv(f.pieces[-1][1]), Fraction(0)))
    if f.lo != -INF or f.hi != INF:
        lines.append((Fraction(0), Fraction(0)))
    return _make(p1, p2, _upper_envelope(lines, p1, p2))


# -- profiles and checkers --------------------------------------------------------

def c_profile_lf(R) -> float:
    """1 + sqrt(1 - 1/R), with value 2 at R = inf."""
    if R == INF:
        return 2.0
    if R < 1:
        raise InvalidParameters(f"profile argument must be >= 1, got {R}")
    return 1.0 + math.sqrt(1.0 - 1.0 / float(R))


LF_PROFILE = LipschitzProfile(c_profile_lf, 2.0, "legendre")


def legendre_condition(r, R) -> bool:
    """r^2 + 4 r / R > 4."""
    return r * r + (0 if R == INF else 4 * r / R) > 4


def check_legendre_theorem(f: ConvexFn1) -> ConditionReport:
    qb = quad_bounds(f)
    r, R = qb.r, qb.R
    val = r * r + (0 if R == INF else 4 * r / R) if r != INF else INF
    ok = r > 0 and legendre_condition(r, R)
    return ConditionReport("legendre-theorem", {"r": r, "R": R}, HOLDS if ok else FAILS,
                           [(0, val)], {"r^2+4r/R": val})


def check_lf_lipschitz(f: ConvexFn1, t, R=None) -> ConditionReport:
    """rho_h(f*, (f + t h)*) <= C(R)^2 t for h <= f <= R h."""
    qb = quad_bounds(f)
    if R is None:
        R = qb.R
    if qb.r < 1 - 1e-12 or qb.R > R * (1 + 1e-12):
        return ConditionReport("lf-lipschitz", {"t": t, "R": R}, NOT_APPLICABLE, [],
                               {"r": qb.r, "R_f": qb.R})
    lhs = rho_h(legendre(f), legendre(add(f, scale_values(t, H))))
    rhs = c_profile_lf(R) ** 2 * t
    return ConditionReport("lf-lipschitz", {"t": t, "R": R},
                           HOLDS if lhs <= rhs * (1 + 1e-12) else FAILS,
                           [(0, float(rhs) - float(lhs))], {"lhs": lhs, "rhs": rhs})


def check_a_xh(f: ConvexFn1, h_sp: ConvexFn1 | None = None, t=Fraction(1, 2)) -> ConditionReport:
    """rho(f^o, (f + t h)^o) <= t in the metric of the self-polar h, for f >= h."""
    h_sp = h_sp or abs_fn()
    if rho_wrt(a_transform(h_sp), h_sp, h_sp) > 1e-9:
        raise InvalidParameters("reference function is not a fixed point of the A-transform")
    if not leq_wrt(h_sp, f, h_sp):
        return ConditionReport("a-xh", {"t": t}, NOT_APPLICABLE, [], {"reason": "f >= h fails"})
    lhs = rho_wrt(a_transform(f), a_transform(add(f, scale_values(t, h_sp))), h_sp)
    ok = lhs <= t + (0 if is_exact(lhs, t) else 1e-12)
    return ConditionReport("a-xh", {"t": t}, HOLDS if ok else FAILS, [(0, t - lhs)],
                           {"lhs": lhs, "slack": t - lhs})


# -- semigroup instances ----------------------------------------------------------

class _FnSemigroup(Semigroup):
    neutral = zero()
    top = indicator()

    def validate(self, x):
        if not isinstance(x, ConvexFn1):
            raise InvalidInput(f"function terms must be ConvexFn1, got {type(x).__name__}")
        return x

    def add(self, x, y):
        return add(x, y)

    def leq(self, x, y, tol=0.0) -> bool:
        return leq_wrt(x, y, self.h, tol)

    def rho(self, x, y):
        return rho_wrt(x, y, self.h)

    def bounds(self, x):
        qb = ratio_bounds(x, self.h)
        return qb.r, qb.R


class LFSemigroup(_FnSemigroup):
    """Involution f -> f*, self-polar h(x) = x^2 / 2, a.f = f(sqrt(a) x)."""

    name = "func-lf"
    profile = LF_PROFILE
    h = H

    def involute(self, x):
        return legendre(x)

    def scale(self, a, x):
        if a == INF:
            return self.top
        if a == 0:
            return self.neutral
        return compose_scale(exact_sqrt(a), x)


class ASemigroup(_FnSemigroup):
    """Involution f -> f^o on piecewise linear functions, a.f = a f pointwise."""

    name = "func-a"

    def __init__(self, h_sp: ConvexFn1 | None = None):
        self.h = h_sp or abs_fn()
        from .core import EXACT_PROFILE
        self.profile = EXACT_PROFILE

    def validate(self, x):
        x = super().validate(x)
        if not x.is_pl:
            raise InvalidInput("A-transform terms must be piecewise linear")
        return x

    def involute(self, x):
        return a_transform(x)

    def scale(self, a, x):
        return scale_values(a, x)


LF = LFSemigroup()
A_ABS = ASemigroup()
