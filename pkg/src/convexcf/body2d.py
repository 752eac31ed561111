"""Planar closed convex sets containing the origin.

A :class:`ConvexBody2` keeps two representations of the same set:

* generators: ``conv({0} | vertices) + cone(rays)``;
* facets: ``{x : <a, x> <= 1 for a in facet_points, <b, x> <= 0 for b in facet_rays}``.

The two are exchanged by the polar map, so ``polar`` is a field swap and
``polar(polar(K))`` returns the identical object.  With ``int``/``Fraction``
coordinates every operation except the metric ones (norms, Hausdorff
distance) is exact.  Float coordinates use the tolerance from ``_num``.

The Euclidean disk is not polyhedral; :class:`Ball` answers the metric
queries for ``rB`` exactly and supports the ball-only algebra
(``rB + sB``, ``(rB)* = B/r``).
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from ._num import EPS, INF, inv, is_exact, sign

ORIGIN = (Fraction(0), Fraction(0))
TWO_PI = 2.0 * math.pi


# -- vector helpers ---------------------------------------------------------

def _add(p, q):
    return (p[0] + q[0], p[1] + q[1])


def _sub(p, q):
    return (p[0] - q[0], p[1] - q[1])


def _mul(a, p):
    return (a * p[0], a * p[1])


def _dot(p, q):
    return p[0] * q[0] + p[1] * q[1]


def _cross(p, q):
    return p[0] * q[1] - p[1] * q[0]


def _len(p) -> float:
    return math.hypot(float(p[0]), float(p[1]))


def _is_zero(p) -> bool:
    if is_exact(*p):
        return p[0] == 0 and p[1] == 0
    return _len(p) <= EPS


def _parallel_sign(p, q) -> int:
    """Sign of cross(p, q) with tolerance relative to |p||q|."""
    c = _cross(p, q)
    if isinstance(c, Rational):
        return (c > 0) - (c < 0)
    return sign(c, _len(p) * _len(q))


def _dot_sign(p, q) -> int:
    d = _dot(p, q)
    if isinstance(d, Rational):
        return (d > 0) - (d < 0)
    return sign(d, _len(p) * _len(q))


def _normalize_dir(v):
    if is_exact(*v):
        m = max(abs(v[0]), abs(v[1]))
        return (Fraction(v[0]) / m, Fraction(v[1]) / m)
    n = _len(v)
    return (v[0] / n, v[1] / n)


def _half(v) -> int:
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def _angle_cmp(p, q) -> int:
    hp, hq = _half(p), _half(q)
    if hp != hq:
        return hp - hq
    c = _cross(p, q)
    return -1 if c > 0 else (1 if c < 0 else 0)


_angle_key = functools.cmp_to_key(_angle_cmp)


def angle_of(v) -> float:
    a = math.atan2(float(v[1]), float(v[0]))
    return a + TWO_PI if a < 0 else a


def as_point(p):
    """Integer coordinates become Fractions so that int / int stays exact."""
    x, y = p
    return (Fraction(x) if isinstance(x, int) else x, Fraction(y) if isinstance(y, int) else y)


# -- hull and facet computation --------------------------------------------

def _hull(points):
    """Convex hull, CCW, collinear and duplicate points removed.

    Returns one point, two points (a segment), or a polygon.
    """
    pts = sorted(set(as_point(p) for p in points))
    if not is_exact(*(c for p in pts for c in p)):
        merged = []
        for p in pts:
            if not merged or _len(_sub(p, merged[-1])) > EPS:
                merged.append(p)
        pts = merged
    if len(pts) <= 1:
        return pts

    def turn(o, a, b):
        return _parallel_sign(_sub(a, o), _sub(b, o))

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and turn(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and turn(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and _is_zero(_sub(hull[0], hull[1])):
        return hull[:1]
    return hull


def _unique_dirs(rays):
    dirs = sorted((_normalize_dir(r) for r in rays if not _is_zero(r)), key=_angle_key)
    out = []
    for d in dirs:
        if out and _parallel_sign(out[-1], d) == 0 and _dot(out[-1], d) > 0:
            continue
        out.append(d)
    if len(out) > 1 and _parallel_sign(out[-1], out[0]) == 0 and _dot(out[-1], out[0]) > 0:
        out.pop()
    return out


def _classify_cone(dirs):
    """Classify cone(dirs) as point/ray/wedge/line/halfplane/plane.

    Returns (kind, w_a, w_b) where the cone spans CCW from w_a to w_b.
    """
    n = len(dirs)
    if n == 0:
        return "point", None, None
    if n == 1:
        return "ray", dirs[0], dirs[0]
    gaps = []
    for i in range(n):
        u, v = dirs[i], dirs[(i + 1) % n]
        c = _parallel_sign(u, v)
        if c > 0:
            kind = "lt"
        elif c < 0:
            kind = "gt"
        else:
            kind = "eq" if _dot(u, v) < 0 else "lt"
        gaps.append((kind, u, v))
    for kind, u, v in gaps:
        if kind == "gt":
            return "wedge", v, u
    pi_gaps = [(u, v) for kind, u, v in gaps if kind == "eq"]
    if pi_gaps:
        if n == 2:
            return "line", dirs[0], dirs[1]
        u, v = pi_gaps[0]
        return "halfplane", v, u
    return "plane", None, None


def _max_dot(n, pts):
    return max(_dot(n, p) for p in pts)


def _split(halfspaces):
    """(normal, offset) pairs to the (facet_points, facet_rays) form."""
    fpts, frays = [], []
    for n, c in halfspaces:
        if _is_zero(n):
            continue
        if sign(c, _len(n)) > 0:
            fpts.append(_mul(Fraction(1) / c if is_exact(c) else 1.0 / c, n))
        else:
            frays.append(_normalize_dir(n))
    fpts.sort(key=_angle_key)
    frays.sort(key=_angle_key)
    return tuple(fpts), tuple(frays)


def _facets(points, rays):
    """Minimal H-representation of conv({0} | points) + cone(rays)."""
    pts = _hull([ORIGIN, *points])
    dirs = _unique_dirs(rays)
    kind, wa, wb = _classify_cone(dirs)
    if kind == "plane":
        return (), ()
    if kind == "line":
        m = (-wa[1], wa[0])
        mm = (wa[1], -wa[0])
        return _split([(m, _max_dot(m, pts)), (mm, _max_dot(mm, pts))])
    if kind == "halfplane":
        m = (wa[1], -wa[0])
        return _split([(m, _max_dot(m, pts))])

    vecs = [p for p in pts if not _is_zero(p)] + list(dirs)
    if not vecs:
        one, zero = Fraction(1), Fraction(0)
        return (), ((one, zero), (zero, one), (-one, zero), (zero, -one))
    d = vecs[0]
    if all(_parallel_sign(d, v) == 0 for v in vecs):
        dd = _dot(d, d)
        ts = [_dot(d, p) / dd for p in pts]
        hi, lo = max(ts), min(ts)
        for w in dirs:
            if _dot(w, d) > 0:
                hi = INF
            else:
                lo = -INF
        hs = [((-d[1], d[0]), 0), ((d[1], -d[0]), 0)]
        if hi != INF:
            hs.append((d, hi * dd))
        if lo != -INF:
            hs.append(((-d[0], -d[1]), -lo * dd))
        return _split(hs)

    # full-dimensional with pointed recession cone
    k = len(pts)
    edges = []
    if k >= 2:
        for i in range(k):
            p, q = pts[i], pts[(i + 1) % k]
            e = _sub(q, p)
            edges.append(((e[1], -e[0]), p))
    hs = []
    for n, p in edges:
        if kind == "point" or (_dot_sign(n, wa) < 0 and _dot_sign(n, wb) < 0):
            hs.append((n, _dot(n, p)))
    if kind != "point":
        for n in ((wa[1], -wa[0]), (-wb[1], wb[0])):
            hs.append((n, _max_dot(n, pts)))
    return _split(hs)


def _poly_sum(P, Q):
    """Minkowski sum of two convex hulls (CCW vertex lists) by edge merging."""
    if len(P) == 1:
        return [_add(P[0], q) for q in Q]
    if len(Q) == 1:
        return [_add(p, Q[0]) for p in P]

    def rotate(H):
        i = min(range(len(H)), key=lambda j: (H[j][1], H[j][0]))
        return H[i:] + H[:i]

    P, Q = rotate(P), rotate(Q)
    edges = [_sub(P[(i + 1) % len(P)], P[i]) for i in range(len(P))]
    edges += [_sub(Q[(i + 1) % len(Q)], Q[i]) for i in range(len(Q))]
    edges.sort(key=_angle_key)
    cur = _add(P[0], Q[0])
    out = [cur]
    for e in edges[:-1]:
        cur = _add(cur, e)
        out.append(cur)
    return out


# -- the body ---------------------------------------------------------------

@dataclass(frozen=True)
class ConvexBody2:
    """Closed convex subset of the plane containing the origin."""

    vertices: tuple
    rays: tuple
    facet_points: tuple
    facet_rays: tuple

    @classmethod
    def from_generators(cls, points=(), rays=()) -> "ConvexBody2":
        fp, fr = _facets(points, rays)
        vp, vr = _facets(fp, fr)
        return cls(vp, vr, fp, fr)

    @classmethod
    def from_halfspaces(cls, halfspaces) -> "ConvexBody2":
        """Set ``{x : <n, x> <= c}``; every offset must be nonnegative."""
        pairs = list(halfspaces)
        if any(c < 0 for _, c in pairs):
            raise ValueError("halfspace offsets must be >= 0 so the set contains the origin")
        fp, fr = _split(pairs)
        return cls.from_generators(fp, fr).polar()

    @property
    def halfspaces(self):
        one, zero = Fraction(1), Fraction(0)
        return [(a, one) for a in self.facet_points] + [(b, zero) for b in self.facet_rays]

    @property
    def is_bounded(self) -> bool:
        return not self.rays

    def polar(self) -> "ConvexBody2":
        return ConvexBody2(self.facet_points, self.facet_rays, self.vertices, self.rays)

    def scale(self, a) -> "ConvexBody2":
        if a <= 0:
            raise ValueError("scale factor must be positive")
        ia = Fraction(1) / a if is_exact(a) else 1.0 / a
        return ConvexBody2(
            tuple(_mul(a, v) for v in self.vertices),
            self.rays,
            tuple(_mul(ia, f) for f in self.facet_points),
            self.facet_rays,
        )

    def hull_points(self):
        return _hull([ORIGIN, *self.vertices])

    def __add__(self, other):
        return minkowski_sum(self, other)

    def __repr__(self) -> str:
        def show(vs):
            return "[" + ", ".join(f"({float(x):.6g}, {float(y):.6g})" for x, y in vs) + "]"
        return f"ConvexBody2(vertices={show(self.vertices)}, rays={show(self.rays)})"


@dataclass(frozen=True)
class Ball:
    """Centred Euclidean disk of radius ``radius`` (0 and inf allowed)."""

    radius: float

    def polar(self) -> "Ball":
        return Ball(inv(self.radius))

    def scale(self, a) -> "Ball":
        return Ball(self.radius * a)

    def __add__(self, other):
        return minkowski_sum(self, other)


# -- constructors -----------------------------------------------------------

def point() -> ConvexBody2:
    """The neutral element {0}."""
    return ConvexBody2.from_generators()


def plane() -> ConvexBody2:
    one, zero = Fraction(1), Fraction(0)
    return ConvexBody2.from_generators((), [(one, zero), (-one, zero), (zero, one), (zero, -one)])


def polygon(vertices, rays=()) -> ConvexBody2:
    """``conv(vertices) + cone(rays)``; the result must contain the origin."""
    vertices = [as_point(v) for v in vertices]
    body = ConvexBody2.from_generators(vertices, rays)
    if vertices and not _origin_in_hull(vertices, rays):
        raise ValueError("convex set must contain the origin")
    return body


def _origin_in_hull(vertices, rays) -> bool:
    # 0 lies in conv(V) + cone(W) unless it is a new extreme point of the hull with 0 added.
    if any(_is_zero(v) for v in vertices):
        return True
    return not origin_is_vertex(ConvexBody2.from_generators(vertices, rays))


def origin_is_vertex(K) -> bool:
    """Whether 0 is an extreme point of K (its normal cone is two-dimensional)."""
    fr = K.facet_rays
    return any(_parallel_sign(fr[i], fr[j]) != 0 for i in range(len(fr)) for j in range(i))


def segment(p, q) -> ConvexBody2:
    p, q = as_point(p), as_point(q)
    d = _sub(q, p)
    if _is_zero(d):
        if not _is_zero(p):
            raise ValueError("degenerate segment must be the origin")
        return point()
    if _parallel_sign(d, _sub(ORIGIN, p)) != 0 or _dot(_sub(ORIGIN, p), _sub(ORIGIN, q)) > 0:
        raise ValueError("segment must contain the origin")
    return ConvexBody2.from_generators([p, q])


def strip(a, direction=(Fraction(1), Fraction(0))) -> ConvexBody2:
    """``{x : |<u, x>| <= a}`` for the unit vector u along ``direction`` (default ``|x_1| <= a``)."""
    if a <= 0:
        raise ValueError("strip half-width must be positive")
    n = as_point(direction)
    s = _dot(n, n)
    c = a if (is_exact(s) and s == 1) else a * math.sqrt(s)
    return ConvexBody2.from_halfspaces([(n, c), ((-n[0], -n[1]), c)])


def halfplane(n, c) -> ConvexBody2:
    return ConvexBody2.from_halfspaces([(as_point(n), c)])


def regular_polygon(k: int, r=1.0, phase: float = 0.0) -> ConvexBody2:
    """Regular k-gon with circumradius r, first vertex at angle ``phase``."""
    if k < 3 or r <= 0:
        raise ValueError("need k >= 3 and r > 0")
    r = float(r)
    vs = [(r * math.cos(phase + TWO_PI * j / k), r * math.sin(phase + TWO_PI * j / k)) for j in range(k)]
    return ConvexBody2.from_generators(vs)


def ball_ngon(r=1.0, n: int = 64) -> ConvexBody2:
    """Inscribed regular n-gon approximation of rB (vertices on the circle)."""
    return regular_polygon(n, r)


# -- queries ----------------------------------------------------------------

def support(K, u):
    """Support function ``sup <u, x>``, inf when unbounded in direction u."""
    if isinstance(K, Ball):
        return K.radius * _len(u) if K.radius != INF else (0.0 if _is_zero(u) else INF)
    for w in K.rays:
        if _dot_sign(w, u) > 0:
            return INF
    return max([_dot(v, u) for v in K.vertices] + [0])


def radial(K, u):
    """Radial function ``sup{t : t u in K}``."""
    if isinstance(K, Ball):
        return K.radius / _len(u)
    for b in K.facet_rays:
        if _dot_sign(b, u) > 0:
            return 0
    ts = [1 / _dot(a, u) for a in K.facet_points if _dot_sign(a, u) > 0]
    return min(ts) if ts else INF


def norm(K):
    """Radius of the smallest centred disk containing K."""
    if isinstance(K, Ball):
        return K.radius
    if K.rays:
        return INF
    return max([_len(v) for v in K.vertices] + [0.0])


def inradius_centered(K):
    """Largest r with rB inside K."""
    if isinstance(K, Ball):
        return K.radius
    if K.facet_rays:
        return 0.0
    if not K.facet_points:
        return INF
    return min(1.0 / _len(a) for a in K.facet_points)


def contains_point(K, p, tol=0.0) -> bool:
    if isinstance(K, Ball):
        return _len(p) <= K.radius + tol
    lp = _len(p)
    for a in K.facet_points:
        excess = _dot(a, p) - 1
        if excess > tol * _len(a) and sign(excess, 1.0 + _len(a) * lp) > 0:
            return False
    for b in K.facet_rays:
        excess = _dot(b, p)
        if excess > tol * _len(b) and sign(excess, _len(b) * (1.0 + lp)) > 0:
            return False
    return True


def _in_recession_cone(K, w) -> bool:
    for a in list(K.facet_points) + list(K.facet_rays):
        if _dot_sign(a, w) > 0:
            return False
    return True


def contains(K, L, tol=0.0) -> bool:
    """Whether L is a subset of K (up to ``tol`` in the constraint offsets)."""
    if isinstance(L, Ball):
        if L.radius == 0:
            return True
        if isinstance(K, Ball):
            return L.radius <= K.radius + tol
        return L.radius <= inradius_centered(K) + tol
    if isinstance(K, Ball):
        return norm(L) <= K.radius + tol
    if not all(_in_recession_cone(K, w) for w in L.rays):
        return False
    return all(contains_point(K, v, tol) for v in L.vertices)


def same_set(K, L, tol=0.0) -> bool:
    return contains(K, L, tol) and contains(L, K, tol)


def same_recession_cone(K, L) -> bool:
    return all(_in_recession_cone(L, w) for w in K.rays) and all(
        _in_recession_cone(K, w) for w in L.rays)


# -- operations -------------------------------------------------------------

def polar(K):
    return K.polar()


def _ball_or_body(K):
    if isinstance(K, Ball):
        if K.radius == 0:
            return point()
        if K.radius == INF:
            return plane()
    return K


def minkowski_sum(K, L):
    if isinstance(K, Ball) and isinstance(L, Ball):
        return Ball(K.radius + L.radius)
    K, L = _ball_or_body(K), _ball_or_body(L)
    if isinstance(K, Ball) or isinstance(L, Ball):
        raise ValueError("Minkowski sum of a disk and a polygon is not polyhedral")
    P, Q = K.hull_points(), L.hull_points()
    return ConvexBody2.from_generators(_poly_sum(P, Q), list(K.rays) + list(L.rays))


def hull_union(K, L):
    """Closed convex hull of the union."""
    if isinstance(K, Ball) and isinstance(L, Ball):
        return Ball(max(K.radius, L.radius))
    K, L = _ball_or_body(K), _ball_or_body(L)
    if isinstance(K, Ball) or isinstance(L, Ball):
        raise ValueError("convex hull of a disk and a polygon is not polyhedral")
    return ConvexBody2.from_generators(list(K.vertices) + list(L.vertices), list(K.rays) + list(L.rays))


def _float_hull(K):
    return [(float(x), float(y)) for x, y in K.hull_points()]


def _walk_argmax(pts, us):
    """Argmax of <p, u> over a CCW convex polygon for directions sorted by angle.

    The maximizer moves counterclockwise as u turns, so one pass suffices.
    """
    n = len(pts)
    out = []
    if n == 0:
        return [(0.0, 0.0)] * len(us)
    j = max(range(n), key=lambda i: pts[i][0] * us[0][0] + pts[i][1] * us[0][1]) if us else 0
    for u in us:
        d = pts[j][0] * u[0] + pts[j][1] * u[1]
        for _ in range(n):
            k = (j + 1) % n
            dk = pts[k][0] * u[0] + pts[k][1] * u[1]
            if dk <= d:
                break
            j, d = k, dk
        out.append(pts[j])
    return out


def _unbounded_toward(K, u) -> bool:
    return any(_dot_sign(w, u) > 0 for w in K.rays)


def _normal_angles(K):
    return [angle_of(a) for a in K.facet_points] + [angle_of(b) for b in K.facet_rays]


def _in_arc(theta, lo, hi) -> bool:
    t = theta
    while t < lo:
        t += TWO_PI
    while t >= lo + TWO_PI:
        t -= TWO_PI
    return lo < t < hi


def _unit(theta):
    return (math.cos(theta), math.sin(theta))


def _queries(angles):
    """Each normal angle followed by the midpoint of the arc to the next one."""
    qs = []
    n = len(angles)
    for i in range(n):
        lo = angles[i]
        hi = angles[i + 1] if i + 1 < n else angles[0] + TWO_PI
        qs.append((lo, None))
        if hi - lo > 1e-15:
            qs.append((0.5 * (lo + hi), (lo, hi)))
    return qs


def hausdorff(K, L) -> float:
    """Hausdorff distance, computed as the sup-norm of the support difference.

    The support difference is a sinusoid on every arc between consecutive
    facet normals, so the supremum is found analytically per arc.  Sets with
    different recession cones are at distance inf.
    """
    if isinstance(K, Ball) and isinstance(L, Ball):
        if K.radius == L.radius:
            return 0.0
        return abs(K.radius - L.radius)
    if isinstance(K, Ball):
        K, L = L, K
    if isinstance(L, Ball):
        L = _ball_or_body(L)
    if isinstance(L, Ball):
        return _hausdorff_ball(K, L.radius)
    if not same_recession_cone(K, L):
        return INF
    angles = sorted(set(_normal_angles(K) + _normal_angles(L)))
    if not angles:
        return 0.0
    qs = _queries(angles)
    us = [_unit(t) for t, _ in qs]
    ak, al = _walk_argmax(_float_hull(K), us), _walk_argmax(_float_hull(L), us)
    vals = [0.0]
    for (th, arc), u, vk, vl in zip(qs, us, ak, al):
        if _unbounded_toward(K, u) or _unbounded_toward(L, u):
            continue
        d = (vk[0] - vl[0], vk[1] - vl[1])
        if arc is None:
            vals.append(abs(d[0] * u[0] + d[1] * u[1]))
            continue
        if d == (0.0, 0.0):
            continue
        td = math.atan2(d[1], d[0])
        if _in_arc(td, *arc) or _in_arc(td + math.pi, *arc):
            vals.append(math.hypot(*d))
    return max(vals)


def _hausdorff_ball(K, r) -> float:
    if K.rays:
        return INF
    angles = sorted(set(_normal_angles(K)))
    if not angles:
        return r
    qs = _queries(angles)
    us = [_unit(t) for t, _ in qs]
    vals = []
    for (th, arc), u, v in zip(qs, us, _walk_argmax(_float_hull(K), us)):
        if arc is None:
            vals.append(abs(v[0] * u[0] + v[1] * u[1] - r))
            continue
        lv = math.hypot(*v)
        if lv == 0.0:
            vals.append(r)
            continue
        tv = math.atan2(v[1], v[0])
        if _in_arc(tv, *arc):
            vals.append(abs(lv - r))
        if _in_arc(tv + math.pi, *arc):
            vals.append(lv + r)
    return max(vals)
