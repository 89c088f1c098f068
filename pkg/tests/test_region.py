"""Frontier assembly, time-sharing envelopes, dominance and distance."""

import numpy as np
import pytest

import swipt_mac as sm
from swipt_mac.region import assemble_frontier


def pt(r1, r2, rho=0.5):
    return sm.RatePoint(r1, r2, rho)


def test_assemble_sorts_dedups_and_drops_dominated():
    cloud = [
        pt(1.0, 0.2),
        pt(0.4, 0.9),
        pt(0.4, 0.9),  # exact duplicate
        pt(0.9, 0.2),  # duplicate r2, smaller r1: dropped
        pt(0.3, 0.5),  # dominated by the later (0.4, 0.9)
        pt(1.2, 0.0),
    ]
    curve = assemble_frontier(cloud)
    assert [(p.r1, p.r2) for p in curve.points] == [(1.2, 0.0), (1.0, 0.2), (0.4, 0.9)]
    assert not curve.hulled


def test_assemble_keeps_flat_faces():
    cloud = [pt(0.7, 0.1), pt(0.7, 0.4), pt(0.7, 0.8)]
    curve = assemble_frontier(cloud)
    assert len(curve) == 3


def test_assemble_clamps_roundoff_negatives_but_rejects_real_ones():
    curve = assemble_frontier([pt(-1e-14, 0.3), pt(0.5, -1e-13)])
    assert curve.points[0].r2 == 0.0 and curve.points[0].r1 == 0.5
    assert curve.points[1].r1 == 0.0
    with pytest.raises(ValueError):
        assemble_frontier([pt(-1e-6, 0.3)])


def test_boundary_curve_rejects_ascending_r1():
    with pytest.raises(ValueError):
        sm.BoundaryCurve(points=[pt(0.2, 0.1), pt(0.5, 0.3)])


def test_upper_hull_adds_axis_intercept():
    hull = sm.upper_hull([pt(0.8, 0.3), pt(0.5, 0.6)])
    assert hull.hulled
    # the r2=0 intercept materializes; the right end keeps the original point
    # (an r1=0 companion at the same r2 would be dropped as a duplicate)
    assert hull.points[0].r2 == 0.0 and hull.points[0].r1 == pytest.approx(0.8)
    assert hull.metadata[0].get("intercept") is True
    assert hull.points[-1].r1 == pytest.approx(0.5)
    assert hull.points[-1].r2 == pytest.approx(0.6)


def test_upper_hull_keeps_collinear_points():
    # three points on one chord: degenerate hull must stay fully sampled
    hull = sm.upper_hull([pt(1.0, 0.0), pt(0.75, 0.25), pt(0.5, 0.5)])
    interior = [p for p in hull.points if 0.0 < p.r2 < 0.5]
    assert any(abs(p.r2 - 0.25) < 1e-12 for p in interior)


def test_upper_hull_removes_sagging_points():
    hull = sm.upper_hull([pt(1.0, 0.0), pt(0.2, 0.25), pt(0.5, 0.5), pt(0.0, 1.0)])
    # (0.2, 0.25) sits under the chord from (1,0) to (0.5,0.5)
    assert all(abs(p.r2 - 0.25) > 1e-9 for p in hull.points)


def test_upper_hull_is_concave_and_contains_input_over_random_clouds():
    rng = np.random.default_rng(31)
    for _ in range(30):
        cloud = [pt(r1, r2) for r1, r2 in rng.uniform(0.0, 2.0, size=(25, 2))]
        hull = sm.upper_hull(cloud)
        # every input point lies on or below the envelope
        for p in cloud:
            assert hull.interp_r1(p.r2) >= p.r1 - 1e-9
        # concavity: interior points never sag below the chord of neighbours
        r2, r1 = hull.r2, hull.r1
        for i in range(1, len(r2) - 1):
            chord = np.interp(r2[i], [r2[i - 1], r2[i + 1]], [r1[i - 1], r1[i + 1]])
            assert r1[i] >= chord - 1e-9


def test_dominates_weak_containment_and_reach():
    outer = sm.upper_hull([pt(1.0, 0.0), pt(0.0, 1.0)])
    inner = sm.upper_hull([pt(0.5, 0.0), pt(0.0, 0.5)])
    assert sm.dominates(outer, inner, 1e-9)
    assert not sm.dominates(inner, outer, 1e-9)
    # equal curves dominate each other within tolerance
    assert sm.dominates(outer, outer, 1e-12)
    # reach: a curve that is higher but shorter does not dominate
    tall = sm.upper_hull([pt(2.0, 0.0), pt(2.0, 0.3)])
    wide = sm.upper_hull([pt(0.1, 0.0), pt(0.1, 1.0)])
    assert not sm.dominates(tall, wide, 1e-9)


def test_dominates_rejects_empty_curves():
    curve = sm.upper_hull([pt(1.0, 0.5)])
    empty = sm.BoundaryCurve(points=[], empty_reason="fee exceeds harvest")
    with pytest.raises(ValueError):
        sm.dominates(curve, empty, 1e-9)
    with pytest.raises(ValueError):
        sm.dominates(empty, curve, 1e-9)


def test_hausdorff_zero_on_identical_and_symmetric():
    a = sm.upper_hull([pt(1.0, 0.0), pt(0.6, 0.4), pt(0.0, 1.0)])
    assert sm.hausdorff(a, a) == 0.0
    b = sm.upper_hull([pt(1.1, 0.0), pt(0.0, 1.0)])
    assert sm.hausdorff(a, b) == pytest.approx(sm.hausdorff(b, a))
    assert sm.hausdorff(a, b) > 0.0


def test_hausdorff_known_offset():
    a = sm.BoundaryCurve(points=[pt(1.0, 0.0), pt(1.0, 1.0)])
    b = sm.BoundaryCurve(points=[pt(1.25, 0.0), pt(1.25, 1.0)])
    assert sm.hausdorff(a, b) == pytest.approx(0.25, abs=1e-12)
