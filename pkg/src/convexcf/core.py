"""Continued fractions over an ordered semigroup with an order-reversing involution.

An instance supplies addition, the involution, positive scaling, the order
(with tolerance) and the metric ``rho(x, y) = inf{t : x <= y + t h, y <= x + t h}``
built from a self-polar element ``h``.  The engine here only uses that
interface, so the same code drives numbers, planar convex sets and convex
functions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from ._num import INF

WINDOW = 8

CONVERGED = "converged"
OSCILLATING = "diverged-oscillating"
UNDETERMINED = "undetermined"


class InvalidInput(ValueError):
    """A term or value outside the representable family of an instance."""


class InvalidParameters(ValueError):
    """Checker parameters outside their admissible range."""


@dataclass(frozen=True)
class LipschitzProfile:
    """The constant C_R controlling rho(x*, (x + t h)*) <= C_R^2 t for h <= x <= R h.

    ``func`` must be nondecreasing and right-continuous with ``func(1) == 1``.
    """

    func: Callable[[float], float]
    c_inf: float
    name: str = "custom"

    def __call__(self, R) -> float:
        if R == INF:
            return self.c_inf
        if R < 1 - 1e-12:
            raise InvalidParameters(f"profile argument must be >= 1, got {R}")
        return self.func(max(float(R), 1.0))

    @property
    def exact(self) -> bool:
        return self.c_inf == 1


EXACT_PROFILE = LipschitzProfile(lambda R: 1.0, 1.0, "exact")


class Semigroup:
    """Base class for an instance.  Subclasses fill in the abstract operations.

    ``bounds(x)`` returns ``(r, R)`` with ``r h <= x <= R h`` as tight as the
    instance can compute them; checkers use it for their numeric witnesses.
    """

    name = "abstract"
    profile: LipschitzProfile = EXACT_PROFILE
    h: Any = None
    neutral: Any = None
    top: Any = None

    def add(self, x, y):
        raise NotImplementedError

    def involute(self, x):
        raise NotImplementedError

    def scale(self, a, x):
        raise NotImplementedError

    def leq(self, x, y, tol=0.0) -> bool:
        raise NotImplementedError

    def rho(self, x, y):
        raise NotImplementedError

    def bounds(self, x):
        raise NotImplementedError

    def validate(self, x):
        return x

    def norm(self, x):
        return self.rho(x, self.neutral)

    @property
    def exact_xh(self) -> bool:
        return self.profile.exact

    def mult_h(self, a):
        """``a h`` with the conventions 0 h = e and inf h = e*."""
        if a == 0:
            return self.neutral
        if a == INF:
            return self.top
        return self.scale(a, self.h)


@dataclass(frozen=True)
class TermSequence:
    """Terms x_1, x_2, ... given as a finite list, a repeating cycle or a rule n -> x_n."""

    mode: str
    items: tuple = ()
    rule: Callable[[int], Any] | None = None

    @classmethod
    def finite(cls, terms: Sequence) -> "TermSequence":
        return cls("finite", tuple(terms))

    @classmethod
    def periodic(cls, cycle: Sequence) -> "TermSequence":
        if not cycle:
            raise InvalidInput("periodic cycle must be nonempty")
        return cls("periodic", tuple(cycle))

    @classmethod
    def constant(cls, x) -> "TermSequence":
        return cls("periodic", (x,))

    @classmethod
    def from_rule(cls, rule: Callable[[int], Any]) -> "TermSequence":
        return cls("rule", (), rule)

    @property
    def available(self):
        return len(self.items) if self.mode == "finite" else INF

    @property
    def period(self):
        return len(self.items) if self.mode == "periodic" else None

    def __getitem__(self, n: int):
        if n < 1:
            raise IndexError("terms are indexed from 1")
        if self.mode == "finite":
            return self.items[n - 1]
        if self.mode == "periodic":
            return self.items[(n - 1) % len(self.items)]
        return self.rule(n)

    def window(self, start: int, length: int) -> list:
        return [self[i] for i in range(start, start + length)]


def as_terms(terms) -> TermSequence:
    if isinstance(terms, TermSequence):
        return terms
    if callable(terms):
        return TermSequence.from_rule(terms)
    return TermSequence.finite(list(terms))


def fraction_value(sg: Semigroup, xs: Sequence):
    """[x_1, ..., x_n] by backward recursion from x_n*."""
    if not xs:
        raise InvalidInput("continued fraction needs at least one term")
    z = sg.involute(xs[-1])
    for x in reversed(xs[:-1]):
        z = sg.involute(sg.add(x, z))
    return z


def approximant(sg: Semigroup, terms, n: int):
    """The nth approximant z_n = [x_1, ..., x_n]."""
    terms = as_terms(terms)
    if n < 1 or n > terms.available:
        raise InvalidInput(f"need 1 <= n <= {terms.available}, got {n}")
    return fraction_value(sg, [sg.validate(x) for x in terms.window(1, n)])


def approximants(sg: Semigroup, terms, N: int) -> list:
    """z_1, ..., z_N.

    Periodic sequences reuse the tails: with period p the shifted fractions
    T_j(L) = [x_j, ..., x_{j+L-1}] satisfy T_j(L) = (x_j + T_{j+1}(L-1))*, so
    the whole trace costs p N steps instead of N^2 / 2.
    """
    terms = as_terms(terms)
    if N > terms.available:
        raise InvalidInput(f"only {terms.available} terms available, asked for {N}")
    if terms.mode == "periodic":
        cyc = [sg.validate(x) for x in terms.items]
        p = len(cyc)
        tails = [sg.involute(x) for x in cyc]
        out = [tails[0]]
        for _ in range(2, N + 1):
            tails = [sg.involute(sg.add(cyc[j], tails[(j + 1) % p])) for j in range(p)]
            out.append(tails[0])
        return out
    return [approximant(sg, terms, n) for n in range(1, N + 1)]


def dual_add(sg: Semigroup, x, y):
    """x (+) y = (x* + y*)*."""
    return sg.involute(sg.add(sg.involute(x), sg.involute(y)))


@dataclass
class TraceEntry:
    n: int
    z: Any
    gap: float | None
    norm: float


@dataclass
class ApproximantTrace:
    entries: list
    verdict: str
    limit_estimate: Any = None
    tol: float = 0.0
    events: list = field(default_factory=list)

    @property
    def approximants(self) -> list:
        return [e.z for e in self.entries]

    @property
    def gaps(self) -> list:
        return [e.gap for e in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


def classify(sg: Semigroup, zs: list, gaps: list, tol: float, window: int = WINDOW):
    """Verdict and limit estimate for a list of approximants.

    Converged: the last ``window`` gaps are below tol.  Oscillating: the even
    and odd subsequences each move by less than tol over their last
    ``window // 2`` steps while staying more than 10 tol apart.
    """
    defined = [g for g in gaps if g is not None]
    if len(defined) >= window and all(g < tol for g in defined[-window:]):
        return CONVERGED, zs[-1]
    half = window // 2
    N = len(zs)
    if N >= 2 * half + 2:
        steps = [sg.rho(zs[i], zs[i + 2]) for i in range(N - 2 * half - 2, N - 2)]
        if all(s < tol for s in steps) and sg.rho(zs[-1], zs[-2]) > 10 * tol:
            return OSCILLATING, None
    return UNDETERMINED, None


def approximant_trace(sg: Semigroup, terms, N: int, tol: float = 1e-9,
                      window: int = WINDOW) -> ApproximantTrace:
    if N < 2:
        raise InvalidParameters("trace needs N >= 2")
    zs = approximants(sg, terms, N)
    gaps = [sg.rho(zs[i], zs[i + 1]) for i in range(N - 1)] + [None]
    entries = [TraceEntry(i + 1, z, g, sg.norm(z)) for i, (z, g) in enumerate(zip(zs, gaps))]
    verdict, limit = classify(sg, zs, gaps, tol, window)
    events = []
    n_inf = sum(1 for g in gaps if g == INF)
    if n_inf:
        events.append(f"{n_inf} infinite gaps")
    tail = [g for g in gaps[:-1]][-window:]
    if tail and all(g == INF for g in tail):
        events.append("gap infinite over the trailing window")
    return ApproximantTrace(entries, verdict, limit, tol, events)


def is_finite(x) -> bool:
    return x is not None and not (isinstance(x, float) and (math.isnan(x) or math.isinf(x))) and x != INF
