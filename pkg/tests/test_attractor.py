import math

import numpy as np
import pytest

from pullback_chain import (
    BandParameters,
    RateBounds,
    UnconvergedError,
    attractor_path,
    build_generator,
    build_transition,
    constant_driver,
    equivariance_defects,
    forward_tracking_report,
    hilbert_distance,
    periodic_attractor,
    periodic_driver,
    positivity_floor,
    pullback_point,
    random_driver,
    stationary_distribution,
    subdominant_spectral_bound,
    transition_at,
)
from pullback_chain.cocycle import cocycle_matrix
from pullback_chain.hilbert import PROPORTIONAL_RTOL

EPS = 1e-10
A = BandParameters(2, (1.0, 2.0))
B = BandParameters(2, (2.0, 1.0))
BOUNDS2 = RateBounds(1.0, 2.0)
# fixed point of L_B @ L_A at delta=0.1, checked by hand: L_A (8, 9)/17 = (9, 8)/17, L_B (9, 8)/17 = (8, 9)/17
PHASE0 = np.array([8.0, 9.0]) / 17.0
PHASE1 = np.array([9.0, 8.0]) / 17.0


def _period_fixed_point_by_iteration(mats, iters=10_000):
    x = np.full(mats[0].shape[0], 1.0 / mats[0].shape[0])
    for _ in range(iters):
        for L in mats:
            x = L @ x
        x /= x.sum()
    return x


def test_constant_driver_gives_stationary_vector():
    bands = BandParameters(3, (1.0, 2.0, 1.5, 1.0))
    d = constant_driver(bands, RateBounds(1.0, 2.0))
    a = pullback_point(d, 0, 0.1, EPS)
    assert a.error_radius < EPS
    assert hilbert_distance(a.point, stationary_distribution(bands)) <= 1e-10


def test_periodic_pullback_matches_period_fixed_point():
    d = periodic_driver([A, B], BOUNDS2)
    mats = [transition_at(d, 0, 0.1), transition_at(d, 1, 0.1)]
    oracle = _period_fixed_point_by_iteration(mats)
    np.testing.assert_allclose(oracle, PHASE0, atol=1e-15)
    assert hilbert_distance(pullback_point(d, 0, 0.1, EPS).point, oracle) <= 1e-10
    assert hilbert_distance(pullback_point(d, 1, 0.1, EPS).point, PHASE1) <= 1e-10


def test_degenerate_random_matches_constant():
    c = constant_driver(BandParameters(4, (1.3,) * 6), RateBounds(1.3, 1.3))
    r = random_driver(4, RateBounds(1.3, 1.3), seed=8)
    a, b = pullback_point(c, 5, 0.2, EPS), pullback_point(r, 5, 0.2, EPS)
    np.testing.assert_array_equal(a.point, b.point)
    assert a.pullback_depth == b.pullback_depth


def test_unconverged_carries_best_estimate():
    d = random_driver(5, RateBounds(0.5, 1.0), seed=1)
    with pytest.raises(UnconvergedError) as info:
        pullback_point(d, 0, 0.05, EPS, max_depth=6)
    best = info.value.best
    assert best.pullback_depth == 6 and best.error_radius >= EPS
    assert abs(best.point.sum() - 1) < 1e-12


def test_certificate_soundness():
    d = random_driver(5, RateBounds(0.5, 2.0), seed=42)
    a = pullback_point(d, 3, 0.2, 1e-8)
    F = cocycle_matrix(d, 3 - a.pullback_depth, a.pullback_depth, 0.2).matrix
    for i in range(5):
        for j in range(5):
            assert hilbert_distance(F[:, i], F[:, j]) <= a.error_radius + 1e-12
    # a much deeper pullback lands within the certified radius
    deep = pullback_point(d, 3, 0.2, 1e-13)
    assert hilbert_distance(a.point, deep.point) <= a.error_radius + 1e-13


def test_attractor_floor():
    bounds = RateBounds(0.5, 2.0)
    for seed in range(10):
        d = random_driver(4, bounds, seed)
        floor = positivity_floor(0.2, bounds, 4).gamma_floor
        for a in attractor_path(d, -2, 2, 0.2, EPS):
            assert a.point.min() >= floor - 1e-12


def test_constant_path_is_constant():
    bands = BandParameters(3, (1.0, 2.0, 1.5, 1.0))
    d = constant_driver(bands, RateBounds(1.0, 2.0))
    pbar = stationary_distribution(bands)
    for a in attractor_path(d, 0, 5, 0.1, EPS):
        assert hilbert_distance(a.point, pbar) <= 1e-10


@pytest.mark.parametrize("T", [2, 3])
def test_periodic_path_has_period(T, rng):
    blocks = [BandParameters(3, tuple(rng.uniform(1, 2, 4))) for _ in range(T)]
    d = periodic_driver(blocks, RateBounds(1, 2))
    path = attractor_path(d, 0, 2 * T, 0.15, EPS)
    for n in range(T + 1):
        assert hilbert_distance(path[n].point, path[n + T].point) <= 2 * EPS


def test_equivariance_random_window():
    d = random_driver(4, RateBounds(0.5, 2.0), seed=77)
    path = attractor_path(d, -10, 10, 0.2, EPS)
    assert equivariance_defects(d, path, 0.2).max() <= 2 * EPS


def test_empty_window_rejected():
    with pytest.raises(ValueError):
        attractor_path(random_driver(3, RateBounds(1, 2), 0), 3, 2, 0.1)


def test_forward_tracking_from_attractor_stays_close():
    d = random_driver(3, RateBounds(0.5, 2.0), seed=4)
    a0 = pullback_point(d, 0, 0.2, EPS)
    trace = forward_tracking_report(d, a0.point, 0, 30, 0.2, EPS)
    assert trace.column("forward_distance").max() <= 2 * EPS


def test_forward_tracking_two_state_rate():
    # subdominant eigenvalue of [[0.9, 0.1], [0.1, 0.9]] is 0.8
    d = constant_driver(BandParameters(2, (1.0, 1.0)), RateBounds(1.0, 2.0))
    trace = forward_tracking_report(d, [0.99, 0.01], 0, 60, 0.1, EPS)
    dist = trace.column("forward_distance")
    assert np.all(dist[1:] <= dist[:-1] + 2 * EPS)
    window = (dist > 1e-4) & (dist < 1e-2)
    idx = np.nonzero(window[:-1])[0]
    assert len(idx) > 5
    ratios = dist[idx + 1] / dist[idx]
    assert np.all(ratios <= 0.8 + 1e-6)
    assert ratios[-1] == pytest.approx(0.8, abs=1e-5)


def test_forward_tracking_boundary_start():
    d = random_driver(4, RateBounds(0.5, 2.0), seed=9)
    trace = forward_tracking_report(d, [1, 0, 0, 0], 0, 20, 0.2, EPS)
    dist = trace.column("forward_distance")
    assert np.all(np.isinf(dist[:3]))
    assert np.all(np.isfinite(dist[3:]))


def test_forward_norm_domination(rng):
    d = random_driver(4, RateBounds(0.5, 2.0), seed=12)
    path = attractor_path(d, 0, 80, 0.2, EPS)
    for _ in range(3):
        p = rng.uniform(0.01, 1, 4)
        p /= p.sum()
        trace = forward_tracking_report(d, p, 0, 80, 0.2, EPS, path=path)
        x = p.copy()
        for n, row in enumerate(trace.rows):
            gap = np.abs(x - path[n].point).max()
            assert gap <= math.expm1(max(row.forward_distance, PROPORTIONAL_RTOL))
            x = transition_at(d, n, 0.2) @ x
            x /= x.sum()


def test_periodic_attractor_autonomous():
    bands = BandParameters(3, (1.0, 2.0, 1.5, 1.0))
    pts = periodic_attractor([bands], 0.1, EPS)
    assert len(pts) == 1
    assert hilbert_distance(pts[0].point, stationary_distribution(bands)) <= EPS


def test_periodic_attractor_repeated_block():
    one = periodic_attractor([A], 0.1, EPS)
    two = periodic_attractor([A, A], 0.1, EPS)
    for p in two:
        assert hilbert_distance(p.point, one[0].point) <= EPS


def test_periodic_attractor_exchange_two_state():
    a0, a1 = periodic_attractor([A, B], 0.1, EPS)
    LA = build_transition(build_generator(A), 0.1)
    LB = build_transition(build_generator(B), 0.1)
    assert hilbert_distance(LA @ a0.point, a1.point) <= EPS
    assert hilbert_distance(LB @ a1.point, a0.point) <= EPS
    np.testing.assert_allclose(a0.point, PHASE0, atol=1e-10)


@pytest.mark.parametrize("T", [2, 3, 5])
def test_periodic_cross_validation(T, rng):
    blocks = [BandParameters(4, tuple(rng.uniform(0.5, 2, 6))) for _ in range(T)]
    bounds = RateBounds(0.5, 2.0)
    pts = periodic_attractor(blocks, 0.2, EPS, bounds=bounds)
    d = periodic_driver(blocks, bounds)
    for k, p in enumerate(pts):
        assert hilbert_distance(p.point, pullback_point(d, k, 0.2, EPS).point) <= 2 * EPS


def test_spectral_two_state():
    L = np.array([[0.9, 0.1], [0.1, 0.9]])
    assert subdominant_spectral_bound(L) == pytest.approx(0.8, abs=1e-8)


def test_spectral_identity():
    assert subdominant_spectral_bound(np.eye(4)) == 1.0


@pytest.mark.parametrize("seed", range(15))
def test_spectral_against_characteristic_polynomial(seed):
    r = np.random.default_rng(seed)
    N = int(r.integers(2, 7))
    bounds = RateBounds(0.5, 2.0)
    bands = BandParameters(N, tuple(r.uniform(0.5, 2.0, 2 * N - 2)))
    L = build_transition(build_generator(bands), r.uniform(0.05, 0.95) * bounds.max_step, bounds)
    roots = np.roots(np.poly(L))
    roots = np.delete(roots, np.argmin(np.abs(roots - 1.0)))
    oracle = np.abs(roots).max()
    est = subdominant_spectral_bound(L)
    assert est < 1 - 1e-9
    assert est == pytest.approx(oracle, abs=1e-6)
