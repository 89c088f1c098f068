"""Scalar numerical machinery: bracketed bisection, scan+golden-section
maximization, critical-point location and a guarded 2x2 linear solve.

Everything here is generic; the physics lives in the calling modules.  The
routines favour robustness over speed: the optimization landscape of the
PS-factor problems is cheap to evaluate and piecewise smooth, so a dense
scan with local refinement is both simple and reliable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "RootConfig",
    "ScanConfig",
    "BracketError",
    "EvaluationError",
    "SingularMatrixError",
    "bisect_root",
    "maximize_scan",
    "critical_points",
    "solve_2x2",
]


class BracketError(RuntimeError):
    """The supplied interval does not bracket a sign change."""


class EvaluationError(RuntimeError):
    """The objective produced NaN (or nothing finite at all)."""


class SingularMatrixError(RuntimeError):
    """2x2 system is singular to working precision."""


@dataclass(frozen=True)
class RootConfig:
    abs_tol: float = 1e-12
    max_iter: int = 200

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be > 0")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


@dataclass(frozen=True)
class ScanConfig:
    grid_points: int = 20001
    refine_iters: int = 100

    def __post_init__(self):
        if self.grid_points < 3:
            raise ValueError("grid_points must be >= 3")


_DEFAULT_ROOT = RootConfig()
_DEFAULT_SCAN = ScanConfig()

# golden ratio section for the refinement stage
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def bisect_root(f, lo, hi, cfg: RootConfig = _DEFAULT_ROOT):
    """Root of a continuous f on [lo, hi] with f(lo)*f(hi) <= 0.

    Plain bisection: halves the bracket until its width is below
    cfg.abs_tol (or max_iter is hit) and returns the midpoint.  Raises
    BracketError when the endpoints do not straddle zero and
    EvaluationError on NaN.
    """
    flo = f(lo)
    fhi = f(hi)
    if math.isnan(flo) or math.isnan(fhi):
        raise EvaluationError("NaN at bracket endpoint")
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise BracketError(
            f"no sign change on [{lo}, {hi}]: f(lo)={flo}, f(hi)={fhi}"
        )
    for _ in range(cfg.max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo < cfg.abs_tol:
            return mid
        fm = f(mid)
        if math.isnan(fm):
            raise EvaluationError(f"NaN at x={mid}")
        if fm == 0.0:
            return mid
        if flo * fm < 0.0:
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def _golden_max(f, lo, hi, iters):
    """Golden-section refinement for a maximum on [lo, hi].

    Returns the best (x, f(x)) pair seen, which is what matters when f is
    not exactly unimodal on the bracket.
    """
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    best_x, best_v = (c, fc) if fc >= fd else (d, fd)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
        for x, v in ((c, fc), (d, fd)):
            if not math.isnan(v) and v > best_v:
                best_x, best_v = x, v
        if b - a < 1e-15 * max(1.0, abs(a) + abs(b)):
            break
    return best_x, best_v


def maximize_scan(f, lo, hi, cfg: ScanConfig = _DEFAULT_SCAN):
    """Global 1-D maximization: dense grid scan + golden-section refinement.

    Non-finite samples (NaN, -inf) are treated as infeasible and skipped;
    if every sample is non-finite the landscape is empty and
    EvaluationError is raised.  The result is never worse than the best
    coarse-grid sample.
    """
    if not lo < hi:
        raise ValueError("need lo < hi")
    n = cfg.grid_points
    step = (hi - lo) / (n - 1)
    best_i, best_v = -1, -math.inf
    values = [0.0] * n
    for i in range(n):
        x = lo + i * step
        v = f(x)
        values[i] = v
        if not math.isnan(v) and v > best_v:
            best_i, best_v = i, v
    if best_i < 0 or best_v == -math.inf:
        raise EvaluationError("no finite sample on the scan grid")
    a = lo + max(best_i - 1, 0) * step
    b = lo + min(best_i + 1, n - 1) * step
    x_ref, v_ref = _golden_max(f, a, b, cfg.refine_iters)
    if v_ref > best_v:
        return x_ref, v_ref
    return lo + best_i * step, best_v


def critical_points(f, lo, hi, cfg: ScanConfig = _DEFAULT_SCAN):
    """Interior sign changes of the central-difference derivative of f.

    The derivative is sampled on a uniform grid with step (hi-lo)/grid_points
    and each sign change is refined by bisection on the derivative.
    Endpoints are excluded; an empty list is a legitimate answer for
    monotone f.
    """
    if not lo < hi:
        raise ValueError("need lo < hi")
    h = (hi - lo) / cfg.grid_points

    def df(x):
        return (f(x + h) - f(x - h)) / (2.0 * h)

    # interior nodes where the central difference stays inside [lo, hi]
    xs = [lo + h * i for i in range(1, cfg.grid_points)]
    roots = []
    prev_x = None
    prev_d = None
    for x in xs:
        d = df(x)
        if math.isnan(d):
            prev_x, prev_d = None, None
            continue
        if prev_d is not None and (d == 0.0 or prev_d * d < 0.0):
            if d == 0.0 and prev_d == 0.0:
                prev_x, prev_d = x, d
                continue
            try:
                r = bisect_root(df, prev_x, x)
            except BracketError:  # pragma: no cover - guarded above
                prev_x, prev_d = x, d
                continue
            if not roots or abs(r - roots[-1]) > 2.0 * h:
                roots.append(r)
        prev_x, prev_d = x, d
    return roots


def solve_2x2(m11, m12, m21, m22, rhs1, rhs2):
    """Cramer solution of [[m11,m12],[m21,m22]] @ (x1,x2) = (rhs1,rhs2).

    Raises SingularMatrixError when |det| is below 1e-14 relative to the
    squared max-entry norm (determinant carries squared units).
    """
    det = m11 * m22 - m12 * m21
    norm = max(abs(m11), abs(m12), abs(m21), abs(m22))
    if norm == 0.0 or abs(det) <= 1e-14 * norm * norm:
        raise SingularMatrixError(f"2x2 system singular: det={det}, norm={norm}")
    x1 = (rhs1 * m22 - m12 * rhs2) / det
    x2 = (m11 * rhs2 - rhs1 * m21) / det
    return x1, x2
