"""Scalar root finding, scan-and-refine maximization, tiny linear solves."""

import math

import numpy as np
import pytest

import swipt_mac as sm
from swipt_mac.numerics import (
    BracketError,
    EvaluationError,
    RootConfig,
    ScanConfig,
    SingularMatrixError,
)


def test_bisect_root_known_roots():
    r = sm.bisect_root(math.cos, 0.0, math.pi, RootConfig(abs_tol=1e-13, max_iter=200))
    assert r == pytest.approx(math.pi / 2.0, abs=1e-12)
    r = sm.bisect_root(lambda x: 3.0 * x - 1.2, -1.0, 2.0)
    assert r == pytest.approx(0.4, abs=1e-11)


def test_bisect_root_requires_a_sign_change():
    with pytest.raises(BracketError):
        sm.bisect_root(lambda x: x * x + 1.0, -1.0, 1.0)


def test_bisect_root_rejects_nan_evaluations():
    def f(x):
        return math.nan if 0.4 < x < 0.6 else x - 0.5

    with pytest.raises(EvaluationError):
        sm.bisect_root(f, 0.0, 1.0)


def test_root_config_validation():
    with pytest.raises(ValueError):
        RootConfig(abs_tol=0.0)
    with pytest.raises(ValueError):
        RootConfig(max_iter=0)


def test_maximize_scan_refines_past_the_grid():
    x, v = sm.maximize_scan(
        lambda t: -(t - 0.31729) ** 2, 0.0, 1.0, ScanConfig(grid_points=17, refine_iters=60)
    )
    assert x == pytest.approx(0.31729, abs=1e-9)
    assert v == pytest.approx(0.0, abs=1e-15)


def test_maximize_scan_never_loses_to_its_own_grid():
    # spiky objective: refinement must return at least the best coarse sample
    rng = np.random.default_rng(7)
    knots = rng.uniform(0.0, 1.0, 40)

    def f(t):
        return float(np.sum(np.exp(-((t - knots) ** 2) * 4e4)))

    cfg = ScanConfig(grid_points=101, refine_iters=30)
    x, v = sm.maximize_scan(f, 0.0, 1.0, cfg)
    grid_best = max(f(t) for t in np.linspace(0.0, 1.0, cfg.grid_points))
    assert v >= grid_best - 1e-12


def test_maximize_scan_skips_invalid_islands():
    def f(t):
        if t < 0.2:
            return -math.inf
        if t > 0.9:
            return math.nan
        return -(t - 0.5) ** 2

    x, v = sm.maximize_scan(f, 0.0, 1.0, ScanConfig(grid_points=201, refine_iters=40))
    assert x == pytest.approx(0.5, abs=1e-8)


def test_maximize_scan_with_nothing_finite_raises():
    with pytest.raises(EvaluationError):
        sm.maximize_scan(lambda t: math.nan, 0.0, 1.0, ScanConfig(51, 10))


def test_scan_config_validation():
    with pytest.raises(ValueError):
        ScanConfig(grid_points=1)
    with pytest.raises(ValueError):
        ScanConfig(grid_points=2)


def test_critical_points_finds_interior_extrema():
    pts = sm.critical_points(math.sin, 0.0, 3.0 * math.pi, ScanConfig(4001, 40))
    want = [math.pi / 2.0, 3.0 * math.pi / 2.0, 5.0 * math.pi / 2.0]
    assert len(pts) == len(want)
    for got, exp in zip(sorted(pts), want):
        assert got == pytest.approx(exp, abs=1e-6)


def test_solve_2x2_matches_numpy():
    rng = np.random.default_rng(11)
    for _ in range(50):
        m = rng.normal(size=(2, 2))
        if abs(np.linalg.det(m)) < 1e-3:
            continue
        rhs = rng.normal(size=2)
        x1, x2 = sm.solve_2x2(m[0, 0], m[0, 1], m[1, 0], m[1, 1], rhs[0], rhs[1])
        ref = np.linalg.solve(m, rhs)
        assert x1 == pytest.approx(ref[0], abs=1e-10)
        assert x2 == pytest.approx(ref[1], abs=1e-10)


def test_solve_2x2_flags_singular_systems():
    with pytest.raises(SingularMatrixError):
        sm.solve_2x2(1.0, 2.0, 2.0, 4.0, 1.0, 2.0)
