import math
import random
from fractions import Fraction as F

import pytest

from convexcf import body2d as bd
from convexcf.body2d import Ball
from convexcf.core import (CONVERGED, OSCILLATING, InvalidInput, InvalidParameters, TermSequence,
                           approximant_trace, approximants)
from convexcf.criteria import FAILS, HOLDS, NOT_APPLICABLE, check_monotone, fixed_point_residual
from convexcf.setcf import (SETS, SetCFProblem, check_constant_theorem, check_nec_suf,
                            fixed_point_scaling, parallelogram_inradius, periodic_two_condition,
                            polar_lipschitz_check, segments_at_120, set_cf_trace,
                            three_segment_condition, three_segment_threshold)

import oracles


def test_strip_trace_converges_to_segment():
    tr = set_cf_trace(SetCFProblem(TermSequence.constant(bd.strip(1)), 1e-9, 60))
    assert tr.verdict == CONVERGED
    z = tr.limit_estimate
    assert not z.rays
    assert bd.norm(z) == pytest.approx(oracles.GOLDEN_LIMIT, abs=1e-9)
    # F_n is the segment with end-points +-[1, ..., 1]_n on the first axis
    for n, e in enumerate(tr.entries[:8], start=1):
        if n % 2 == 0:
            assert bd.same_set(e.z, bd.segment((-oracles.convergent([1] * n), 0),
                                               (oracles.convergent([1] * n), 0)))


def test_segment_trace_oscillates():
    tr = set_cf_trace(SetCFProblem(TermSequence.constant(bd.segment((0, 0), (1, 0))), 1e-9, 40))
    assert tr.verdict == OSCILLATING
    assert all(e.z.rays for e in tr.entries[::2])
    assert all(not e.z.rays for e in tr.entries[1::2])


def test_seidel_pair_oscillates():
    K, L = bd.segment((-1, 0), (1, 0)), bd.segment((-1, -1), (1, 1))
    tr = set_cf_trace(SetCFProblem(TermSequence.periodic([K, L]), 1e-9, 60))
    assert tr.verdict == OSCILLATING


def test_whole_plane_event():
    tr = set_cf_trace(SetCFProblem(TermSequence.finite([bd.point(), bd.strip(1)]), 1e-9, 2))
    assert any("whole plane" in ev for ev in tr.events)


def test_problem_validates_terms():
    with pytest.raises(InvalidInput):
        SetCFProblem([1.0, 2.0])


def test_disk_plus_polygon_rejected():
    with pytest.raises(InvalidInput):
        SETS.add(Ball(1.0), bd.ball_ngon(1.0, 8))


def test_constant_theorem_examples():
    assert check_constant_theorem(Ball(3)).details["case"] == "i"
    assert check_constant_theorem(Ball(1)).details["case"] == "ii"
    assert check_constant_theorem(bd.segment((0, 0), (1, 0))).verdict == FAILS
    assert check_constant_theorem(bd.strip(1)).verdict == FAILS
    assert approximant_trace(SETS, TermSequence.constant(bd.strip(1)), 60).verdict == CONVERGED
    assert check_constant_theorem(Ball(0.5)).details["case"] == "iii"
    assert check_constant_theorem(bd.ball_ngon(0.5, 4)).details["case"] == "iii"
    thin = bd.polygon([(2, 0), (0, F(1, 2)), (-2, 0), (0, F(-1, 2))])
    assert check_constant_theorem(thin).verdict == FAILS


def test_nec_suf_examples():
    rep = check_nec_suf(bd.strip(1))
    assert rep.holds and rep.details["k"] == 2
    assert rep.certificates[-1][1] == pytest.approx(2 / 3)
    assert check_nec_suf(bd.segment((0, 0), (1, 0)), 20).verdict == FAILS
    for eps in (0.5, 1.0, 3.0):
        rep = check_nec_suf(Ball(eps), 30)
        assert rep.holds
    with pytest.raises(InvalidParameters):
        check_nec_suf(bd.strip(1), 0)


def test_nec_suf_limit_radius():
    for eps, target in oracles.BALL_LIMITS.items():
        zs = approximants(SETS, TermSequence.constant(Ball(float(eps))), 61)
        assert zs[-1].radius == pytest.approx(target, abs=1e-9)
        assert target < 1


def test_polar_lipschitz_examples():
    B, B2 = bd.ball_ngon(1.0, 64), bd.ball_ngon(2.0, 64)
    rep = polar_lipschitz_check(B, B2)
    assert rep.holds
    assert rep.details["lhs"] == pytest.approx(0.5, abs=1e-3)
    assert rep.details["rhs"] == pytest.approx(1.0, abs=1e-2)
    sq = bd.polygon([(1, 1), (-1, 1), (-1, -1), (1, -1)])
    rep = polar_lipschitz_check(sq, sq)
    assert rep.holds and rep.details["lhs"] == 0
    seg = bd.segment((-1, 0), (1, 0))
    assert polar_lipschitz_check(seg, sq).verdict == NOT_APPLICABLE


def test_polar_lipschitz_random():
    rng = random.Random(11)
    core = [(F(1, 2), F(1, 2)), (F(-1, 2), F(1, 2)), (F(-1, 2), F(-1, 2)), (F(1, 2), F(-1, 2))]
    for _ in range(40):
        K, L = (bd.polygon(core + [(F(rng.randint(-16, 16), 8), F(rng.randint(-16, 16), 8))
                                   for _ in range(4)]) for _ in range(2))
        assert polar_lipschitz_check(K, L).holds


def test_set_condition_on_polytopes():
    # rho_H(K*, (K + tB)*) <= t when B is inside K; tB via a circumscribed polygon
    rng = random.Random(3)
    for _ in range(20):
        pts = [(F(rng.randint(-24, 24), 8), F(rng.randint(-24, 24), 8)) for _ in range(5)]
        K = bd.polygon(pts + [(2, 2), (-2, 2), (-2, -2), (2, -2)])
        for t in (0.01, 0.1, 1.0):
            outer = bd.ball_ngon(t / math.cos(math.pi / 64), 64)
            lhs = bd.hausdorff(K.polar(), (K + outer).polar())
            assert lhs <= t / math.cos(math.pi / 64) + 1e-12


def test_parallelogram_inradius():
    assert parallelogram_inradius((1, 0), (0, 1)) == 1
    assert parallelogram_inradius((2, 0), (0, 1)) == pytest.approx(1.0)
    P = bd.segment((-2, 0), (2, 0)) + bd.segment((-1, -1), (1, 1))
    assert parallelogram_inradius((2, 0), (1, 1)) == pytest.approx(bd.inradius_centered(P))


def test_three_segment_condition():
    rep = three_segment_condition(*segments_at_120(1.0))
    assert rep.verdict == FAILS
    assert rep.details["identity_error"] < 1e-12
    best = max(three_segment_condition(*segments_at_120(L)).details["max_a"]
               for L in [0.5, 1, math.sqrt(2), 2, 4])
    assert best == pytest.approx(math.sqrt(3) / 2 * math.sqrt(2) / 2, abs=1e-9)
    with pytest.raises(InvalidParameters):
        three_segment_condition((1, 0), (2, 0), (0, 1))


def test_three_segment_kernel_identity_random():
    rng = random.Random(2)
    for _ in range(20):
        us = [(rng.uniform(-3, 3), rng.uniform(-3, 3)) for _ in range(3)]
        rep = three_segment_condition(*us)
        assert rep.details["identity_error"] < 1e-9


def test_three_segment_threshold_not_found():
    L_star, (best, at) = three_segment_threshold(samples=120)
    assert L_star is None
    assert best < 1
    assert at == pytest.approx(math.sqrt(2), rel=0.05)


def test_periodic_two_condition():
    B2 = bd.ball_ngon(2.0, 64)
    rep = periodic_two_condition(B2, B2)
    assert rep.holds
    assert rep.details["r1"] == pytest.approx(2 + 1 / 2.5, abs=5e-3)
    assert periodic_two_condition(bd.ball_ngon(0.1, 64), bd.ball_ngon(0.1, 64)).verdict == FAILS
    seg = bd.segment((-1, 0), (1, 0))
    assert periodic_two_condition(seg, B2).verdict == FAILS


def test_ball_reduction_matches_scalar():
    for r in (0.5, 1.0, 2.0, 3.0):
        zs = approximants(SETS, TermSequence.constant(Ball(r)), 40)
        for n, z in enumerate(zs, start=1):
            assert z.radius == pytest.approx(float(oracles.convergent([F(r)] * n)), abs=1e-9)


def test_monotone_set_inclusions():
    for K in (bd.strip(1), bd.ball_ngon(2.0, 16), bd.polygon([(2, 0), (0, 3), (-2, 1), (0, -2)])):
        zs = approximants(SETS, TermSequence.constant(K), 10)
        assert check_monotone(SETS, zs, 1e-12).holds


def test_converged_residual():
    tol = 1e-10
    for K in (bd.strip(1), Ball(0.5), Ball(3.0)):
        tr = approximant_trace(SETS, TermSequence.constant(K), 80, tol)
        assert tr.verdict == CONVERGED
        assert fixed_point_residual(SETS, tr.limit_estimate, K) <= 10 * tol


def test_fixed_point_scaling():
    rows = fixed_point_scaling(Ball(2.0), [1, 2, 4, 8, 16])
    assert rows[0].z.radius == pytest.approx(oracles.constant_limit(2.0), abs=1e-9)
    for row in rows:
        t = row.t
        assert row.scaled.radius == pytest.approx(t * oracles.constant_limit(2 * t), abs=1e-9)
    assert rows[-1].dist_xstar < 1e-3
    assert rows[-1].dist_x == pytest.approx(1.5, abs=1e-3)
    half = fixed_point_scaling(Ball(2.0), [1, 16, 256], beta=0.5)
    assert half[-1].norm < half[0].norm
    assert half[-1].norm < 0.05
    with pytest.raises(InvalidParameters):
        fixed_point_scaling(Ball(2.0), [0.5])
