"""Rate-region geometry: boundary curves, the time-sharing (upper concave)
envelope, dominance tests and polyline distances.

A boundary curve is a Pareto frontier in the (r2, r1) plane: r2 strictly
increasing, r1 non-increasing.  Time sharing between operating points makes
every convex combination achievable, so the physically meaningful envelope
of a point cloud is its upper concave hull augmented with the axis
intercepts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .models import RatePoint

__all__ = ["BoundaryCurve", "upper_hull", "dominates", "hausdorff"]

_NEG_TOL = 1e-12  # clamp threshold for tiny negative rates from roundoff


@dataclass
class BoundaryCurve:
    """Discretized rate-region frontier with per-point solver metadata.

    points are sorted by strictly increasing r2 with non-increasing r1;
    metadata is a parallel list of dicts (PS factor, decoding order or
    weight pair, solver source, ...); hulled records whether a time-sharing
    envelope was applied; empty_reason documents why a curve has no points.
    """

    points: list = field(default_factory=list)
    metadata: list = field(default_factory=list)
    hulled: bool = False
    empty_reason: str | None = None

    def __post_init__(self):
        if self.metadata and len(self.metadata) != len(self.points):
            raise ValueError("metadata must parallel points")
        if not self.metadata:
            self.metadata = [{} for _ in self.points]
        self.validate()

    def validate(self):
        prev = None
        for p in self.points:
            if p.r1 < 0 or p.r2 < 0:
                raise ValueError(f"negative rate in boundary point {p}")
            if prev is not None:
                if not p.r2 > prev.r2:
                    raise ValueError("r2 must be strictly increasing")
                if p.r1 > prev.r1 + 1e-12:
                    raise ValueError("r1 must be non-increasing")
            prev = p

    def __len__(self):
        return len(self.points)

    @property
    def r1(self):
        return np.array([p.r1 for p in self.points])

    @property
    def r2(self):
        return np.array([p.r2 for p in self.points])

    def max_r1(self):
        return max((p.r1 for p in self.points), default=0.0)

    def max_r2(self):
        return max((p.r2 for p in self.points), default=0.0)

    def interp_r1(self, r2):
        """Piecewise-linear r1 at the query r2 (flat beyond the ends)."""
        return np.interp(r2, self.r2, self.r1)


def _clamp_point(p: RatePoint):
    r1, r2 = p.r1, p.r2
    if r1 < 0:
        if r1 < -_NEG_TOL:
            raise ValueError(f"negative r1 in {p}")
        r1 = 0.0
    if r2 < 0:
        if r2 < -_NEG_TOL:
            raise ValueError(f"negative r2 in {p}")
        r2 = 0.0
    if r1 != p.r1 or r2 != p.r2:
        return RatePoint(r1, r2, p.rho)
    return p


def assemble_frontier(points, metadata=None, hulled=False):
    """Sort, deduplicate and Pareto-clean a point cloud into a BoundaryCurve.

    Keeps flat runs (constant r1 over increasing r2 is a legitimate face)
    but removes points dominated by a later point, which also absorbs
    roundoff-scale ascents.
    """
    if metadata is None:
        metadata = [{} for _ in points]
    pts = [(_clamp_point(p), m) for p, m in zip(points, metadata)]
    # sort by r2 ascending, ties resolved by larger r1 first
    pts.sort(key=lambda pm: (pm[0].r2, -pm[0].r1))
    # drop duplicate r2 values (the first of a tie has the larger r1)
    dedup = []
    for p, m in pts:
        if dedup and p.r2 - dedup[-1][0].r2 <= 1e-15:
            continue
        dedup.append((p, m))
    # remove dominated predecessors: r1 must never rise with r2
    stack = []
    for p, m in dedup:
        while stack and stack[-1][0].r1 < p.r1:
            stack.pop()
        stack.append((p, m))
    return BoundaryCurve(
        points=[p for p, _ in stack],
        metadata=[m for _, m in stack],
        hulled=hulled,
    )


def _cross(o, a, b):
    """z-component of (a-o) x (b-o) in the (r2, r1) plane."""
    return (a.r2 - o.r2) * (b.r1 - o.r1) - (a.r1 - o.r1) * (b.r2 - o.r2)


def upper_hull(points, metadata=None):
    """Upper concave envelope of a rate-point cloud, with axis intercepts.

    Monotone-chain over points sorted by r2; a chain point is removed only
    when it lies strictly below the chord of its neighbours, so collinear
    points survive (degenerate hulls stay fully sampled).  The input is
    augmented with (r2=0, max r1) and (max r2, r1=0) before hulling, which
    is how time sharing against the single-user extremes closes the region.
    """
    if not points:
        raise ValueError("need at least one point")
    if metadata is None:
        metadata = [{} for _ in points]
    pts = [(_clamp_point(p), m) for p, m in zip(points, metadata)]

    i_top = max(range(len(pts)), key=lambda i: pts[i][0].r1)
    i_right = max(range(len(pts)), key=lambda i: pts[i][0].r2)
    top, m_top = pts[i_top]
    right, m_right = pts[i_right]
    if top.r2 > 0:
        pts.append((RatePoint(top.r1, 0.0, top.rho), dict(m_top, intercept=True)))
    if right.r1 > 0:
        pts.append(
            (RatePoint(0.0, right.r2, right.rho), dict(m_right, intercept=True))
        )

    pts.sort(key=lambda pm: (pm[0].r2, -pm[0].r1))
    dedup = []
    for p, m in pts:
        if dedup and p.r2 - dedup[-1][0].r2 <= 1e-15:
            continue
        dedup.append((p, m))

    chain = []
    for p, m in dedup:
        while len(chain) >= 2 and _cross(chain[-2][0], chain[-1][0], p) > 0.0:
            chain.pop()
        chain.append((p, m))
    # hulling cannot create ascents, but roundoff can; reuse the cleaner
    return assemble_frontier(
        [p for p, _ in chain], [m for _, m in chain], hulled=True
    )


def dominates(curve_a: BoundaryCurve, curve_b: BoundaryCurve, tol: float):
    """True iff curve_a weakly contains curve_b (within tol bits).

    Checks curve_a's interpolated r1 at every r2 sample of curve_b, plus
    the reach condition on the largest r2.
    """
    if not curve_a.points or not curve_b.points:
        raise ValueError("dominates needs non-empty curves")
    if curve_a.max_r2() < curve_b.max_r2() - tol:
        return False
    r2_b = curve_b.r2
    r1_a = curve_a.interp_r1(r2_b)
    # beyond curve_a's reach it achieves nothing, whatever interp says
    r1_a = np.where(r2_b > curve_a.max_r2() + tol, 0.0, r1_a)
    return bool(np.all(r1_a >= curve_b.r1 - tol))


def _points_to_segments_dist(px, py, ax, ay, bx, by):
    """Max over points (px,py) of the min distance to segments (a->b)."""
    dx = bx - ax
    dy = by - ay
    seg_len2 = dx * dx + dy * dy
    worst = 0.0
    for x, y in zip(px, py):
        t = np.where(
            seg_len2 > 0, ((x - ax) * dx + (y - ay) * dy) / np.where(seg_len2 > 0, seg_len2, 1.0), 0.0
        )
        t = np.clip(t, 0.0, 1.0)
        cx = ax + t * dx
        cy = ay + t * dy
        d2 = (x - cx) ** 2 + (y - cy) ** 2
        worst = max(worst, float(np.sqrt(d2.min())))
    return worst


def hausdorff(curve_a: BoundaryCurve, curve_b: BoundaryCurve):
    """Symmetric Hausdorff distance between two frontier polylines [bits]."""
    if not curve_a.points or not curve_b.points:
        raise ValueError("hausdorff needs non-empty curves")

    def arrays(curve):
        x = curve.r2
        y = curve.r1
        if len(x) == 1:
            return x, y, x, y, x, y
        return x, y, x[:-1], y[:-1], x[1:], y[1:]

    ax_pts, ay_pts, aax, aay, abx, aby = arrays(curve_a)
    bx_pts, by_pts, bax, bay, bbx, bby = arrays(curve_b)
    d_ab = _points_to_segments_dist(ax_pts, ay_pts, bax, bay, bbx, bby)
    d_ba = _points_to_segments_dist(bx_pts, by_pts, aax, aay, abx, aby)
    return max(d_ab, d_ba)
