import math
import random
from fractions import Fraction as F

import pytest

from convexcf import fn1d
from convexcf.core import (CONVERGED, InvalidInput, InvalidParameters, TermSequence,
                           approximant_trace, approximants)
from convexcf.criteria import FAILS, HOLDS, NOT_APPLICABLE, check_monotone, fixed_point_residual
from convexcf.fn1d import (A_ABS, H, LF, a_transform, abs_fn, add, c_profile_lf, check_a_xh,
                           check_legendre_theorem, check_lf_lipschitz, h_p_construct, h_p_exact,
                           indicator, inf_conv, legendre, pl, quad_bounds, quadratic, rho_h,
                           rho_wrt)

import gen
import oracles

INF = math.inf
XS = oracles.grid(-6, 6, 1201)


def close_on(f, g, xs, tol):
    return all(abs(float(f(x)) - float(g(x))) <= tol for x in xs)


def test_constructors_check_input():
    with pytest.raises(InvalidInput):
        pl([(0, 0), (1, -1)], None, None)       # negative values
    with pytest.raises(InvalidInput):
        pl([(0, 1), (1, 2)], -1, 1)             # f(0) != 0
    with pytest.raises(InvalidInput):
        pl([(-1, 2), (0, 0), (1, 1), (2, 1)])   # slopes decrease
    with pytest.raises(InvalidInput):
        quadratic(-1)
    with pytest.raises(InvalidInput):
        indicator(1, 2)


def test_legendre_examples():
    assert legendre(abs_fn()) == indicator(-1, 1)
    assert legendre(H) == H
    assert legendre(quadratic(F(3))) == quadratic(F(1, 3))
    assert legendre(fn1d.zero()) == indicator()
    assert legendre(indicator()) == fn1d.zero()


def test_legendre_against_grid():
    f = pl([(-2, 3), (-1, 1), (0, 0), (1, F(1, 2)), (3, 4)], -3, 2)
    g = legendre(f)
    xs = oracles.grid(-20, 20, 8001)
    for y in [-2.5, -1.2, -0.3, 0.0, 0.4, 1.1, 1.9]:
        assert float(g(F(y))) == pytest.approx(oracles.conjugate_grid(lambda x: float(f(F(x))), xs, y),
                                               abs=1e-9)


def test_sampled_quadratic_conjugate_within_bound():
    # PL interpolation of c x^2 / 2 on a grid: conjugate error is at most the sampling error
    for c in (1, 3):
        h = F(1, 8)
        pts = [(h * i, F(c) * (h * i) ** 2 / 2) for i in range(-64, 65)]
        f = pl(pts, None, None)
        bound = c * h * h / 8
        g = legendre(f)
        xs = [F(i, 10) for i in range(-20, 21)]
        assert close_on(g, quadratic(F(1, c)), xs, bound + 1e-12)


def test_inf_conv_examples():
    f = pl([(-1, 2), (0, 0), (2, 1)], -3, 1)
    assert inf_conv(f, indicator()) == f
    assert inf_conv(abs_fn(), abs_fn()) == abs_fn()
    hh = inf_conv(H, H)
    assert hh == quadratic(F(1, 2))
    ys = oracles.grid(-8, 8, 1601)
    for x in (-2.0, -0.5, 1.0, 3.0):
        brute = min(0.5 * y * y + 0.5 * (x - y) ** 2 for y in ys)
        assert float(hh(F(x))) == pytest.approx(brute, abs=1e-4)


def test_inf_conv_identity_random():
    rng = random.Random(8)
    for _ in range(40):
        f, g = gen.random_pl(rng), gen.random_pl(rng)
        assert inf_conv(f, g) == legendre(add(legendre(f), legendre(g)))


def test_rho_h_examples():
    assert rho_h(H, quadratic(2)) == 1
    f = pl([(-1, 2), (0, 0), (2, 1)], -3, 1)
    assert rho_h(f, f) == 0
    assert rho_h(abs_fn(), fn1d.zero()) == INF


def test_rho_h_against_grid():
    rng = random.Random(4)
    far = [10 ** (k / 50) for k in range(0, 201)]
    xs = [x for x in oracles.grid(-8, 8, 3201) if x != 0] + far + [-x for x in far]
    for _ in range(20):
        f, g = gen.random_between(rng, 4), gen.random_between(rng, 4)
        exact = float(rho_h(f, g))
        sampled = oracles.ratio_sup_grid(lambda x: float(f(F(x))), lambda x: float(g(F(x))), xs)
        assert sampled <= exact + 1e-9
        # the sup may sit at x -> +-inf; the samples reach 1e4
        assert exact <= sampled * 1.01 + 1e-9


def test_quad_bounds_examples():
    qb = quad_bounds(H)
    assert (qb.r, qb.R) == (1, 1)
    qb = quad_bounds(abs_fn())
    assert (qb.r, qb.R) == (0, INF)
    # max(x^2 / 2, x^2 - 1) as a PLQ: ratio 1 near 0, tends to 2
    f = fn1d._make(-INF, INF, [(-INF, -math.sqrt(2), (1, 0, -1)),
                               (-math.sqrt(2), math.sqrt(2), (0.5, 0, 0)),
                               (math.sqrt(2), INF, (1, 0, -1))])
    qb = quad_bounds(f)
    assert qb.r == pytest.approx(1)
    assert qb.R == pytest.approx(2)
    ratios = [2 * f(x) / (x * x) for x in XS if x != 0]
    assert min(ratios) >= qb.r - 1e-12 and max(ratios) <= qb.R + 1e-12


def test_c_profile():
    assert c_profile_lf(1) == 1
    assert c_profile_lf(INF) == 2
    assert c_profile_lf(2) == pytest.approx(oracles.C_LF_2, abs=1e-15)
    with pytest.raises(InvalidParameters):
        c_profile_lf(0.5)


def test_legendre_theorem_examples():
    assert check_legendre_theorem(quadratic(2)).holds
    assert check_legendre_theorem(H).holds
    assert check_legendre_theorem(abs_fn()).verdict == FAILS


def test_lf_lipschitz_checker():
    rng = random.Random(6)
    for R in (F(3, 2), 2, 10):
        for _ in range(10):
            f = gen.random_between(rng, R)
            for t in (F(1, 100), F(1, 10), F(1)):
                assert check_lf_lipschitz(f, t, R).holds
    assert check_lf_lipschitz(abs_fn(), F(1, 10)).verdict == NOT_APPLICABLE


def test_a_transform_examples():
    assert a_transform(abs_fn()) == abs_fn()
    f = pl([(0, 0), (1, 0)], 0, 1)
    g = a_transform(f)
    assert g == pl([(0, 0), (1, 1)], None, None)
    ys = oracles.log_grid(-3, 6)
    for x in (0.0, 0.25, 0.5, 0.9, 1.0):
        assert float(g(F(x))) == pytest.approx(
            oracles.a_transform_grid(lambda y: float(f(F(y))), ys, x), abs=1e-3)
    assert g(F(-1, 10)) == INF and g(F(11, 10)) == INF
    assert a_transform(fn1d.zero()) == indicator()
    with pytest.raises(InvalidInput):
        a_transform(H)


def test_a_transform_grid_random():
    rng = random.Random(12)
    ys = oracles.log_grid(-3, 6)
    for _ in range(10):
        f = gen.random_pl(rng)
        g = a_transform(f)
        knots = [float(t) for t in f.breaks if abs(t) != INF]
        for x in (-0.7, -0.2, 0.3, 0.8):
            if g(F(x)) == INF:
                continue
            brute = oracles.a_transform_grid(lambda y: float(f(F(y))), ys + knots, x)
            assert brute <= float(g(F(x))) + 1e-9
            assert float(g(F(x))) - brute < 1e-3


def test_involution_and_order_reversal():
    rng = random.Random(9)
    for _ in range(40):
        f = gen.random_pl(rng)
        assert legendre(legendre(f)) == f
        assert a_transform(a_transform(f)) == f
        g = add(f, gen.random_pl(rng))                  # g >= f
        assert fn1d.leq_wrt(legendre(g), legendre(f))
        assert fn1d.leq_wrt(a_transform(g), a_transform(f), abs_fn())


def test_h_p_family():
    assert h_p_construct(1).fn == abs_fn()
    assert h_p_construct(1).bound == 0
    assert h_p_construct(2).fn == H
    s = h_p_construct(3)
    assert 0 < s.bound < 1e-4
    xs = oracles.grid(-8, 8, 801)
    assert close_on(s.fn, lambda x: h_p_exact(3, x), [F(x) for x in xs], s.bound + 1e-12)
    assert h_p_exact(3, 1) == pytest.approx(math.sqrt(4 / 27))
    with pytest.raises(InvalidParameters):
        h_p_construct(0.5)


def test_a_xh_examples():
    rep = check_a_xh(pl([(0, 0)], -2, 2), abs_fn(), F(1, 2))
    assert rep.holds
    rep = check_a_xh(abs_fn(), abs_fn(), F(1, 3))
    assert rep.holds and rep.details["slack"] >= 0
    rng = random.Random(1)
    for _ in range(20):
        f = add(abs_fn(), gen.random_pl(rng))
        for t in (F(1, 100), F(1)):
            assert check_a_xh(f, abs_fn(), t).holds
    assert check_a_xh(pl([(0, 0)], -F(1, 2), F(1, 2))).verdict == NOT_APPLICABLE


def test_constant_function_fraction():
    tol = 1e-10
    for c in (1, 2, 3):
        tr = approximant_trace(LF, TermSequence.constant(quadratic(c)), 60, tol)
        assert tr.verdict == CONVERGED
        gamma = oracles.constant_limit(c)
        z = tr.limit_estimate
        assert float(quad_bounds(z).r) == pytest.approx(gamma, abs=1e-9)
        assert float(quad_bounds(z).R) == pytest.approx(gamma, abs=1e-9)
        assert fixed_point_residual(LF, z, quadratic(c)) <= 10 * tol


def test_monotone_function_traces():
    rng = random.Random(13)
    for _ in range(5):
        f = gen.random_between(rng, 3)
        assert check_monotone(LF, approximants(LF, TermSequence.constant(f), 6)).holds
        g = add(abs_fn(), gen.random_pl(rng))
        assert check_monotone(A_ABS, approximants(A_ABS, TermSequence.constant(g), 6)).holds


def test_metric_equivalence_across_self_polar_elements():
    # |x| <= 2 h_2 fails near 0, so compare on functions vanishing nowhere but 0:
    # with h1 = |x|, h2 = 2|x| both metrics differ by exactly the factor 2
    h2 = abs_fn(2)
    rng = random.Random(21)
    for _ in range(20):
        f = add(abs_fn(), gen.random_pl(rng))
        g = add(abs_fn(), gen.random_pl(rng))
        r1, r2 = rho_wrt(f, g, abs_fn()), rho_wrt(f, g, h2)
        assert r1 / 2 <= r2 <= 2 * r1 or r1 == r2 == 0
