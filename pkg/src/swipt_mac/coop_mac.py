"""Two-user PS-SWIPT MAC with decode-and-forward user cooperation.

Each user splits its budget P_Ui between a fresh message beamed to its
partner (p12 from user 1, p21 from user 2), a coherently combined common
message (pu1, pu2), and the power burnt decoding the partner's fresh
message.  Fresh-message rates are pinned to the inter-user links,
r1 = 1/2*log2(1+b*p12) and r2 = 1/2*log2(1+c*p21), and the destination must
both cover its decoding cost from the harvested stream and satisfy the
sum mutual-information bound with the coherent power

    S = h1^2*(p12+pu1) + h2^2*(p21+pu2) + 2*h1*h2*sqrt(pu1*pu2).

Weighted-rate solves:

* ``coop_solve_closed_form`` evaluates the linear-system shortcut obtained
  by clearing the denominators of the reduced objective's stationarity
  conditions.  That clearing is degenerate: the cleared pair forces the
  spurious root 1+b*P12 = 1+c*P21 = 0, so its unique solution is always
  P12 = -1/b, P21 = -1/c, Pu1 = P_U1 + 1/b + beta (shown symbolically; see
  the regression tests).  The routine reproduces those formulas faithfully
  and its validity screen (all powers >= 0, rho in [0,1]) therefore rejects
  the result for every parameter set with mu1*mu2 > 0 and beta^2*b*c != 1.
* ``coop_solve_general`` is the load-bearing numeric solver.  The reduced
  weighted objective J(pu1, pu2) (budgets eliminated) does not involve rho,
  so it evaluates two candidate branches: the box maximum of J with the
  destination constraints screened at the minimal covering rho (the
  "interior" branch, optimal when the sum bound is slack), and a per-rho
  nested-bisection solve of the destination cost/sum-rate equality system
  scanned over rho (the "balanced" branch, optimal when the bound binds).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .models import (
    UNBOUNDED,
    ClassicalParams,
    ConstCost,
    CoopParams,
    ExpCost,
    LinCost,
    LinearEh,
    LogCost,
    NoInverseError,
    PowerAllocation,
    RatePoint,
    SaturationError,
)
from .numerics import (
    EvaluationError,
    RootConfig,
    ScanConfig,
    SingularMatrixError,
    bisect_root,
    maximize_scan,
    solve_2x2,
)
from .region import BoundaryCurve, upper_hull

__all__ = [
    "NonUniqueSolutionError",
    "CoopInfeasibleError",
    "CoopSolution",
    "coop_constraints_eval",
    "coop_solve_closed_form",
    "coop_solve_general",
    "coop_mdrb",
    "classicalized",
]

_LOG2 = math.log(2.0)
_ROOT = RootConfig(abs_tol=1e-11, max_iter=100)


class NonUniqueSolutionError(ValueError):
    """The linear power system is singular (beta^2*b*c = 1 or an extreme
    weight pair); the optimal powers are not unique."""


class CoopInfeasibleError(RuntimeError):
    """No feasible cooperative operating point at any PS factor."""


@dataclass
class CoopSolution:
    """One weighted-sum-rate operating point of the cooperative MAC.

    constraint_residuals holds signed slacks: budget1_w/budget2_w [W]
    (budget minus spending, fees charged at the reported rates),
    dest_cost_w [W] (harvest minus destination decoding cost) and
    sum_mi_bits (sum MI bound minus r1+r2).  cooperation_valid reflects
    power non-negativity and rho in [0,1]; the sum bound is tracked
    separately in sum_bound_satisfied.
    """

    alloc: PowerAllocation
    rho: float
    r1: float
    r2: float
    weighted_rate: float
    mu1: float
    mu2: float
    constraint_residuals: dict
    cooperation_valid: bool
    sum_bound_satisfied: bool
    coop_a: float | None = None
    coop_b: float | None = None
    source: str = "general"
    notes: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# scalar plumbing
# ---------------------------------------------------------------------------


def _phi_scalar(cost):
    """Fast scalar closure for a cost model (root loops call this a lot)."""
    if isinstance(cost, ExpCost):
        b = cost.beta
        return lambda r: b * math.expm1(2.0 * _LOG2 * r)
    if isinstance(cost, LogCost):
        b = cost.beta
        return lambda r: b * math.log1p(2.0 * r) / _LOG2
    if isinstance(cost, LinCost):
        b = cost.beta
        return lambda r: 2.0 * b * r
    if isinstance(cost, ConstCost):
        fee = cost.phi0
        return lambda r: fee if r > 0.0 else 0.0
    return lambda r: float(cost.eval(r))  # pragma: no cover - future families


class _Ctx:
    """Per-solve scratch: unpacked parameters and scalar cost closures."""

    __slots__ = (
        "p", "b", "c", "h1", "h2", "n", "n_p", "bud1", "bud2",
        "phi1", "phi2", "phid", "eh", "exp_users", "beta1", "beta2", "k",
    )

    def __init__(self, params: CoopParams):
        self.p = params
        self.b = params.b
        self.c = params.c
        self.h1 = params.h1
        self.h2 = params.h2
        self.n = params.n
        self.n_p = params.n_p
        self.bud1 = params.p_u1_budget
        self.bud2 = params.p_u2_budget
        self.phi1 = _phi_scalar(params.cost_user1)
        self.phi2 = _phi_scalar(params.cost_user2)
        self.phid = _phi_scalar(params.cost_dest)
        self.eh = params.eh
        self.exp_users = isinstance(params.cost_user1, ExpCost) and isinstance(
            params.cost_user2, ExpCost
        )
        if self.exp_users:
            self.beta1 = params.cost_user1.beta
            self.beta2 = params.cost_user2.beta
            self.k = 1.0 - self.beta1 * self.beta2 * self.b * self.c
        else:
            self.beta1 = self.beta2 = self.k = None


def _rate(x: float) -> float:
    return 0.5 * math.log2(1.0 + x)


def _s_total(ctx: _Ctx, p12, p21, pu1, pu2) -> float:
    return (
        ctx.h1 * ctx.h1 * (p12 + pu1)
        + ctx.h2 * ctx.h2 * (p21 + pu2)
        + 2.0 * ctx.h1 * ctx.h2 * math.sqrt(pu1 * pu2)
    )


def _mi_sum(ctx: _Ctx, rho: float, s: float) -> float:
    y = 1.0 - rho
    return 0.5 * math.log2(1.0 + y * s / (y * ctx.n + ctx.n_p))


def _alloc_from_common(ctx: _Ctx, pu1: float, pu2: float):
    """Fresh-message powers from the budget equalities at given common
    powers, or None when the slice is infeasible (a power would go
    negative).  Exp user costs give an affine elimination; other families
    solve the scalar fixed point p12 = q1 - phi1(r2(p21(p12))) by
    bisection (the map is non-decreasing in p12)."""
    q1 = ctx.bud1 - pu1
    q2 = ctx.bud2 - pu2
    if q1 < 0.0 or q2 < 0.0:
        return None
    if ctx.exp_users:
        k = ctx.k
        if abs(k) <= 1e-12:  # exactly singular fee feedback: no finite solution
            return None
        # k < 0 is fine: the unique solution of the two budget identities is
        # the same expression, and the positivity screen below carves out the
        # (narrow) cone where it is physical.
        p12 = (q1 - ctx.beta1 * ctx.c * q2) / k
        p21 = (q2 - ctx.beta2 * ctx.b * q1) / k
        if p12 < -1e-15 or p21 < -1e-15:
            return None
        return max(p12, 0.0), max(p21, 0.0)

    def p21_of(p12):
        return q2 - ctx.phi2(_rate(ctx.b * p12))

    def resid(p12):
        p21 = p21_of(p12)
        if p21 < 0.0:
            return -math.inf
        return (q1 - ctx.phi1(_rate(ctx.c * p21))) - p12

    r0 = resid(0.0)
    if r0 < 0.0:
        return None  # decode fee exceeds the remaining budget even at p12=0
    if r0 == 0.0 or q1 == 0.0:
        p12 = 0.0
    else:
        p12 = bisect_root(resid, 0.0, q1, RootConfig(abs_tol=1e-13, max_iter=100))
    p21 = p21_of(p12)
    if p21 < -1e-12:
        return None
    return max(p12, 0.0), max(p21, 0.0)


def _pu1_interval(ctx: _Ctx, pu2: float):
    """Valid pu1 slice at fixed pu2 (exact for Exp user costs)."""
    q2 = ctx.bud2 - pu2
    if q2 < 0.0:
        return None
    if ctx.exp_users:
        if abs(ctx.k) <= 1e-12:
            return None  # singular elimination: no finite allocation anywhere
        # p21 >= 0 and p12 >= 0 cut the slice at the same two points for
        # either sign of k; which one is the floor swaps with the sign.
        cut_p21 = ctx.bud1 - q2 / (ctx.beta2 * ctx.b)
        cut_p12 = ctx.bud1 - ctx.beta1 * ctx.c * q2
        if ctx.k > 0.0:
            lo, hi = max(0.0, cut_p21), min(ctx.bud1, cut_p12)
        else:
            lo, hi = max(0.0, cut_p12), min(ctx.bud1, cut_p21)
        if lo > hi:
            return None
        return lo, hi
    return 0.0, ctx.bud1


def _covering_rho(ctx: _Ctx, fee: float, s: float):
    """Smallest rho whose harvest covers the destination fee, or None."""
    if fee <= 0.0:
        return 0.0
    try:
        p_req = ctx.eh.inverse(fee)
    except (SaturationError, NoInverseError):
        return None
    tot = s + ctx.n
    if tot <= 0.0:
        return None
    rho = p_req / tot
    if rho > 1.0 + 1e-12:
        return None
    return min(rho, 1.0)


# ---------------------------------------------------------------------------
# general solver branches
# ---------------------------------------------------------------------------


def _interior_candidate(ctx: _Ctx, mu1: float, mu2: float):
    """Box maximum of the rho-free reduced objective, screened against the
    destination constraints at the minimal covering rho.

    J(pu1, pu2) is concave (weighted logs of affine power maps) over the
    convex valid region, so nested golden-section scans are reliable.
    Returns a candidate record or None when the destination cannot cover
    the resulting fee or the sum MI bound fails at the covering rho.
    """
    cfg = ScanConfig(grid_points=49, refine_iters=40)

    def j_on_slice(pu1, pu2):
        al = _alloc_from_common(ctx, pu1, pu2)
        if al is None:
            return -math.inf
        p12, p21 = al
        return mu1 * _rate(ctx.b * p12) + mu2 * _rate(ctx.c * p21)

    def best_over_pu1(pu2):
        span = _pu1_interval(ctx, pu2)
        if span is None:
            return None, -math.inf
        lo, hi = span
        if hi - lo < 1e-15:
            return lo, j_on_slice(lo, pu2)
        try:
            return maximize_scan(lambda x: j_on_slice(x, pu2), lo, hi, cfg)
        except EvaluationError:
            return None, -math.inf

    try:
        pu2_best, _ = maximize_scan(
            lambda y: best_over_pu1(y)[1], 0.0, ctx.bud2, cfg
        )
    except EvaluationError:
        return None
    pu1_best, j_best = best_over_pu1(pu2_best)
    if pu1_best is None or not math.isfinite(j_best):
        return None
    al = _alloc_from_common(ctx, pu1_best, pu2_best)
    if al is None:  # pragma: no cover - guarded by j_best finiteness
        return None
    p12, p21 = al
    r1, r2 = _rate(ctx.b * p12), _rate(ctx.c * p21)
    s = _s_total(ctx, p12, p21, pu1_best, pu2_best)
    rho = _covering_rho(ctx, ctx.phid(r1 + r2), s)
    if rho is None:
        return None
    if _mi_sum(ctx, rho, s) < r1 + r2 - 1e-12:
        return None  # sum bound binds: the balanced branch owns this regime
    return {
        "J": j_best,
        "p12": p12,
        "p21": p21,
        "pu1": pu1_best,
        "pu2": pu2_best,
        "r1": r1,
        "r2": r2,
        "rho": rho,
        "source": "interior",
    }


def _point_eval(ctx: _Ctx, mu1, mu2, rho, pu1, pu2):
    """Full constraint evaluation at one (rho, pu1, pu2), or None."""
    al = _alloc_from_common(ctx, pu1, pu2)
    if al is None:
        return None
    p12, p21 = al
    r1, r2 = _rate(ctx.b * p12), _rate(ctx.c * p21)
    s = _s_total(ctx, p12, p21, pu1, pu2)
    cost_res = ctx.eh.eval(rho * (s + ctx.n)) - ctx.phid(r1 + r2)
    mi_res = _mi_sum(ctx, rho, s) - (r1 + r2)
    return {
        "J": mu1 * r1 + mu2 * r2,
        "p12": p12,
        "p21": p21,
        "pu1": pu1,
        "pu2": pu2,
        "r1": r1,
        "r2": r2,
        "rho": rho,
        "cost_res": cost_res,
        "mi_res": mi_res,
    }


def _inner_cost_roots(ctx, mu1, mu2, rho, pu2, n_seed=9):
    """pu1 values on the valid slice where the destination-cost equality
    holds; seeded sign scan + bisection, all crossings kept."""
    span = _pu1_interval(ctx, pu2)
    if span is None:
        return []
    lo, hi = span
    xs = np.linspace(lo, hi, n_seed)
    prev = None
    roots = []
    for x in xs:
        ev = _point_eval(ctx, mu1, mu2, rho, float(x), pu2)
        if ev is None:
            prev = None
            continue
        cur = (float(x), ev["cost_res"])
        if prev is not None and (prev[1] == 0.0 or prev[1] * cur[1] < 0.0):
            def f(t):
                e = _point_eval(ctx, mu1, mu2, rho, t, pu2)
                return math.nan if e is None else e["cost_res"]
            try:
                roots.append(bisect_root(f, prev[0], cur[0], _ROOT))
            except EvaluationError:
                pass
        prev = cur
    if prev is not None and prev[1] == 0.0:
        roots.append(prev[0])
    out = []
    for r in roots:
        ev = _point_eval(ctx, mu1, mu2, rho, r, pu2)
        if ev is not None:
            out.append(ev)
    return out


def _equality_value(ctx, mu1, mu2, rho, n_outer=17, refine=28):
    """Best feasible candidate at fixed rho with the destination cost tight.

    Maximizes over pu2 the value of the best cost-tight root on each slice
    that stays inside the sum MI bound.  The scan+golden pass (instead of a
    fixed sweep) matters: the profitable stretch of the root branch can be
    narrower than any sane fixed grid -- it ends where the branch runs off
    the p21 >= 0 corner of the power polytope -- and a fixed sweep reads
    the per-rho value there as far lower than it really is, which then
    misleads the outer rho search.
    """
    if ctx.bud2 <= 0.0:
        ev = _slice_best(ctx, mu1, mu2, rho, 0.0)
        if ev is not None:
            ev["source"] = "balanced" if abs(ev["mi_res"]) < 1e-6 else "cost-tight"
        return ev

    cap = _q2_cap(ctx, rho)
    if cap <= 0.0:
        return None  # only zero rates coverable here; the zero corner owns it
    y_lo = max(0.0, ctx.bud2 - 1.02 * cap)

    best = {}

    def g(y):
        ev = _slice_best(ctx, mu1, mu2, rho, float(y))
        if ev is None:
            return -math.inf
        if not best or ev["J"] > best["J"]:
            best.clear()
            best.update(ev)
        return ev["J"]

    try:
        maximize_scan(g, y_lo, ctx.bud2, ScanConfig(n_outer, refine))
    except EvaluationError:
        return None
    if not best:
        return None
    best["source"] = "balanced" if abs(best["mi_res"]) < 1e-6 else "cost-tight"
    return best


def _slice_best(ctx, mu1, mu2, rho, pu2):
    """Best destination-cost-tight candidate on one (rho, pu2) slice that
    also satisfies the sum MI bound, or None."""
    best = None
    for ev in _inner_cost_roots(ctx, mu1, mu2, rho, pu2):
        if ev["mi_res"] >= -1e-12 and (best is None or ev["J"] > best["J"]):
            best = ev
    return best


def _q2_cap(ctx: _Ctx, rho: float):
    """Largest q2 = bud2 - pu2 any feasible point at this rho can spend.

    Necessary cap, not an estimate: both rates are limited by the sum MI
    bound at the maximal receive power and by the fee the maximal harvest
    can cover, and q2 buys p21 plus user 2's decode fee, both increasing
    in those rates.  Large decode-cost slopes push all positive-rate
    points into a thin band of small q2; without this cap a uniform pu2
    scan steps straight over that band.
    """
    rt = ctx.h1 * math.sqrt(ctx.bud1) + ctx.h2 * math.sqrt(ctx.bud2)
    s_max = rt * rt
    r_cap = _mi_sum(ctx, rho, s_max)
    r_cost = ctx.p.cost_dest.inverse(ctx.eh.eval(rho * (s_max + ctx.n)))
    if r_cost is not UNBOUNDED:
        r_cap = min(r_cap, r_cost)
    if r_cap <= 0.0:
        return 0.0
    return math.expm1(2.0 * _LOG2 * r_cap) / ctx.c + ctx.phi2(r_cap)


def _polish_equality(ctx, mu1, mu2, cand, scan: ScanConfig, cycles: int = 2):
    """Local 2-D refinement of the best cost-tight candidate.

    The coarse stage leaves the candidate up to one rho grid cell from the
    true peak, and the peak ridge runs diagonally in (rho, pu2), so
    alternating 1-D passes stall on it.  A nested scan over the local
    window (rho outer, pu2 inner, pu1 still rooted exactly on each slice),
    shrinking the window each cycle, tracks the ridge instead.
    """
    local = ScanConfig(grid_points=11, refine_iters=10)
    rho0, pu20 = cand["rho"], cand["pu2"]
    h_rho = 1.0 / max(scan.grid_points - 1, 1)
    h_pu2 = ctx.bud2 / 16.0
    best = dict(cand)
    for _ in range(cycles):
        found = {}

        def j_rho(x):
            lo_y = max(0.0, pu20 - h_pu2)
            hi_y = min(ctx.bud2, pu20 + h_pu2)
            inner = {}

            def g(y):
                ev = _slice_best(ctx, mu1, mu2, float(x), float(y))
                if ev is None:
                    return -math.inf
                if not inner or ev["J"] > inner["J"]:
                    inner.clear()
                    inner.update(ev)
                return ev["J"]

            if not lo_y < hi_y:
                g(lo_y)
            else:
                try:
                    maximize_scan(g, lo_y, hi_y, local)
                except EvaluationError:
                    return -math.inf
            if not inner:
                return -math.inf
            if not found or inner["J"] > found["J"]:
                found.clear()
                found.update(inner)
            return inner["J"]

        try:
            maximize_scan(
                j_rho, max(0.0, rho0 - h_rho), min(1.0, rho0 + h_rho), local
            )
        except EvaluationError:
            break
        if found and found["J"] > best["J"]:
            best = dict(found)
            rho0, pu20 = best["rho"], best["pu2"]
        h_rho *= 0.25
        h_pu2 *= 0.25
    best["source"] = "balanced" if abs(best.get("mi_res", 0.0)) < 1e-6 else "cost-tight"
    return best


def _all_common_fallback(ctx: _Ctx, mu1, mu2):
    """Everything into the common message: zero rates, always feasible."""
    pu1, pu2 = ctx.bud1, ctx.bud2
    al = _alloc_from_common(ctx, pu1, pu2)
    p12, p21 = al if al is not None else (0.0, 0.0)
    return {
        "J": 0.0,
        "p12": p12,
        "p21": p21,
        "pu1": pu1,
        "pu2": pu2,
        "r1": 0.0,
        "r2": 0.0,
        "rho": 0.0,
        "source": "zero",
    }


def _build_solution(ctx: _Ctx, mu1, mu2, cand, extra_notes=None) -> CoopSolution:
    p12, p21 = cand["p12"], cand["p21"]
    pu1, pu2 = cand["pu1"], cand["pu2"]
    rho = cand["rho"]
    r1, r2 = cand["r1"], cand["r2"]
    s = _s_total(ctx, p12, p21, pu1, pu2)
    residuals = {
        "budget1_w": ctx.bud1 - (p12 + pu1 + ctx.phi1(r2)),
        "budget2_w": ctx.bud2 - (p21 + pu2 + ctx.phi2(r1)),
        "dest_cost_w": ctx.eh.eval(max(rho, 0.0) * (s + ctx.n)) - ctx.phid(r1 + r2),
        "sum_mi_bits": _mi_sum(ctx, rho, s) - (r1 + r2)
        if 0.0 <= rho <= 1.0
        else math.nan,
    }
    valid = (
        min(p12, p21, pu1, pu2) >= -1e-9 and -1e-12 <= rho <= 1.0 + 1e-12
    )
    sum_ok = (
        not math.isnan(residuals["sum_mi_bits"])
        and residuals["sum_mi_bits"] >= -1e-9
    )
    notes = dict(extra_notes or {})
    return CoopSolution(
        alloc=PowerAllocation(p12=p12, p21=p21, pu1=pu1, pu2=pu2),
        rho=rho,
        r1=r1,
        r2=r2,
        weighted_rate=mu1 * r1 + mu2 * r2,
        mu1=mu1,
        mu2=mu2,
        constraint_residuals=residuals,
        cooperation_valid=valid,
        sum_bound_satisfied=sum_ok,
        source=cand.get("source", "general"),
        notes=notes,
    )


def _solve_oriented(ctx: _Ctx, mu1: float, mu2: float, scan: ScanConfig):
    """Best candidate for one user labeling: interior branch, balanced-scan
    branch, and the all-common backstop."""
    cands = []
    interior = _interior_candidate(ctx, mu1, mu2)
    if interior is not None:
        cands.append(interior)

    best_eq = {}

    def j_eq(rho):
        ev = _equality_value(ctx, mu1, mu2, float(rho))
        if ev is None:
            return -math.inf
        if not best_eq or ev["J"] > best_eq["J"]:
            best_eq.clear()
            best_eq.update(ev)
        return ev["J"]

    try:
        maximize_scan(j_eq, 0.0, 1.0, scan)
    except EvaluationError:
        pass
    if best_eq:
        best_eq.setdefault("source", "balanced")
        cands.append(_polish_equality(ctx, mu1, mu2, dict(best_eq), scan))

    if not cands:
        cands.append(_all_common_fallback(ctx, mu1, mu2))

    cand = max(cands, key=lambda cc: cc["J"])
    return cand, sorted(cc["source"] for cc in cands)


def _swap_candidate(cand: dict) -> dict:
    out = dict(cand)
    out["p12"], out["p21"] = cand["p21"], cand["p12"]
    out["pu1"], out["pu2"] = cand["pu2"], cand["pu1"]
    out["r1"], out["r2"] = cand["r2"], cand["r1"]
    return out


def coop_solve_general(
    params: CoopParams, mu1: float, mu2: float, scan: ScanConfig | None = None
) -> CoopSolution:
    """Numeric weighted-sum-rate solve for any EH/cost combination.

    Evaluates the interior branch (reduced-objective box maximum at the
    minimal covering rho, destination bound slack) and the balanced branch
    (destination cost and sum-MI equalities via nested bisection, scanned
    over rho) and returns the better.  The all-common allocation (zero
    rates) backstops both, so a solution always exists.

    The nested bisection roots pu1 exactly on each slice but only grids
    pu2, so the solve is repeated on the user-swapped network (where the
    roles flip) and the better orientation wins; this restores symmetric
    accuracy at extreme weight pairs.

    The default rho scan is deliberately coarse (61 grid points + golden
    refinement): each evaluation runs a two-level nested bisection.
    """
    if mu1 < 0 or mu2 < 0 or mu1 + mu2 <= 0:
        raise ValueError("weights must be non-negative and not both zero")
    scan = scan or ScanConfig(grid_points=61, refine_iters=24)

    ctx = _Ctx(params)
    cand, branches = _solve_oriented(ctx, mu1, mu2, scan)
    cand_m, branches_m = _solve_oriented(_Ctx(params.swapped()), mu2, mu1, scan)
    mirrored = cand_m["J"] > cand["J"]
    if mirrored:
        cand, branches = _swap_candidate(cand_m), branches_m

    return _build_solution(
        ctx,
        mu1,
        mu2,
        cand,
        extra_notes={
            "rho_scan_points": scan.grid_points,
            "branches": branches,
            "mirrored": mirrored,
        },
    )


# ---------------------------------------------------------------------------
# linear-system shortcut
# ---------------------------------------------------------------------------


def coop_solve_closed_form(params: CoopParams, mu1: float, mu2: float) -> CoopSolution:
    """Linear-system shortcut for the all-Exp, common-beta, linear-EH case.

    Solves the cleared stationarity system for (pu1, pu2), recovers
    (p12, p21) from the budget equalities and sets rho from the
    destination-cost equality.  Clearing the denominators of the
    stationarity conditions makes the system degenerate (see module
    docstring): its solution always sits at 1+b*p12 = 1+c*p21 = 0, so the
    validity screen rejects it whenever mu1*mu2 > 0 and beta^2*b*c != 1.
    Kept exact and faithful precisely so that screening-and-rerouting
    behaviour is testable.
    """
    costs = (params.cost_dest, params.cost_user1, params.cost_user2)
    if not all(isinstance(cm, ExpCost) for cm in costs):
        raise TypeError("linear-system shortcut needs Exp costs at all nodes")
    beta = params.cost_dest.beta
    if any(abs(cm.beta - beta) > 1e-12 * max(beta, cm.beta) for cm in costs):
        raise TypeError("linear-system shortcut needs a common beta")
    if not isinstance(params.eh, LinearEh):
        raise TypeError("linear-system shortcut needs the linear EH model")
    if mu1 < 0 or mu2 < 0 or mu1 + mu2 <= 0:
        raise ValueError("weights must be non-negative and not both zero")

    b, c = params.b, params.c
    k = 1.0 - beta * beta * b * c
    if abs(k) <= 1e-12 * max(1.0, beta * beta * b * c):
        raise NonUniqueSolutionError(
            "beta^2*b*c = 1: the power system is singular, solutions non-unique"
        )
    bud1, bud2 = params.p_u1_budget, params.p_u2_budget
    coop_a = bud1 - beta * c * bud2
    coop_b = bud2 - beta * b * bud1

    cc = beta * b * b * c * (mu1 + mu2)
    dd = b * c * (mu1 + mu2 * beta * beta * b * c)
    ee = b * c * (mu2 + mu1 * beta * beta * b * c)
    ff = beta * b * c * c * (mu1 + mu2)
    c1 = mu1 * b * (k + c * coop_b) - mu2 * beta * b * c * (k + b * coop_a)
    c2 = mu2 * c * (k + b * coop_a) - mu1 * beta * b * c * (k + c * coop_b)

    try:
        pu1, pu2 = solve_2x2(-cc, dd, ee, -ff, c1, c2)
    except SingularMatrixError as err:
        # determinant is b^2 c^2 mu1 mu2 k^2: extreme weights land here
        raise NonUniqueSolutionError(str(err)) from err
    p12 = (coop_a - pu1 + beta * c * pu2) / k
    p21 = (coop_b - pu2 + beta * b * pu1) / k

    arg1 = 1.0 + b * p12
    arg2 = 1.0 + c * p21
    degenerate = arg1 <= 1e-12 or arg2 <= 1e-12
    r1 = _rate(b * p12) if arg1 > 1e-12 else 0.0
    r2 = _rate(c * p21) if arg2 > 1e-12 else 0.0

    s = (
        params.h1 ** 2 * (p12 + pu1)
        + params.h2 ** 2 * (p21 + pu2)
        + 2.0 * params.h1 * params.h2 * math.sqrt(max(pu1, 0.0) * max(pu2, 0.0))
    )
    eta = params.eh.eta
    num = beta * (b * p12 + c * p21 + b * c * p12 * p21)
    denom = eta * (s + params.n)
    rho = num / denom if denom > 0.0 else math.inf

    ctx = _Ctx(params)
    residuals = {
        "budget1_w": bud1 - (p12 + pu1 + ctx.phi1(r2)),
        "budget2_w": bud2 - (p21 + pu2 + ctx.phi2(r1)),
        "dest_cost_w": (
            ctx.eh.eval(rho * (s + params.n)) - ctx.phid(r1 + r2)
            if 0.0 <= rho <= 1.0
            else math.nan
        ),
        "sum_mi_bits": (
            _mi_sum(ctx, rho, s) - (r1 + r2) if 0.0 <= rho <= 1.0 else math.nan
        ),
    }
    valid = min(p12, p21, pu1, pu2) >= -1e-12 and 0.0 <= rho <= 1.0
    sum_ok = (
        not math.isnan(residuals["sum_mi_bits"])
        and residuals["sum_mi_bits"] >= -1e-9
    )
    return CoopSolution(
        alloc=PowerAllocation(p12=p12, p21=p21, pu1=pu1, pu2=pu2),
        rho=rho,
        r1=r1,
        r2=r2,
        weighted_rate=mu1 * r1 + mu2 * r2,
        mu1=mu1,
        mu2=mu2,
        constraint_residuals=residuals,
        cooperation_valid=valid,
        sum_bound_satisfied=sum_ok,
        coop_a=coop_a,
        coop_b=coop_b,
        source="closed-form",
        notes={
            "degenerate_log": degenerate,
            "log_args": (arg1, arg2),
            "system_residuals": (
                -cc * pu1 + dd * pu2 - c1,
                ee * pu1 - ff * pu2 - c2,
            ),
            # budget identities in expanded power form (exact even when the
            # rate-based fee breaks down at nonpositive log arguments)
            "budget_power_residuals": (
                bud1 - (p12 + pu1 + beta * c * p21),
                bud2 - (p21 + pu2 + beta * b * p12),
            ),
            "rho_consistency_w": num - eta * rho * (s + params.n)
            if math.isfinite(rho)
            else math.nan,
            "coefficients": {
                "C": cc, "D": dd, "E": ee, "F": ff, "C1": c1, "C2": c2,
            },
        },
    )


# ---------------------------------------------------------------------------
# constraint evaluation and the weighted frontier
# ---------------------------------------------------------------------------


def coop_constraints_eval(
    params: CoopParams, alloc: PowerAllocation, rho: float, r1: float, r2: float
) -> dict:
    """Signed slacks of all six operating constraints at a candidate point.

    Positive means satisfied with room: link1/link2 in bits, sum MI in
    bits, destination cost in W, and the two user budgets in W.
    """
    ctx = _Ctx(params)
    p12, p21, pu1, pu2 = alloc.p12, alloc.p21, alloc.pu1, alloc.pu2
    s = _s_total(ctx, p12, p21, max(pu1, 0.0), max(pu2, 0.0))
    return {
        "link1_bits": _rate(ctx.b * max(p12, 0.0)) - r1,
        "link2_bits": _rate(ctx.c * max(p21, 0.0)) - r2,
        "sum_mi_bits": _mi_sum(ctx, rho, s) - (r1 + r2),
        "dest_cost_w": ctx.eh.eval(rho * (s + ctx.n)) - ctx.phid(r1 + r2),
        "budget1_w": ctx.bud1 - (p12 + pu1 + ctx.phi1(r2)),
        "budget2_w": ctx.bud2 - (p21 + pu2 + ctx.phi2(r1)),
    }


def classicalized(params: CoopParams) -> ClassicalParams:
    """The same destination link without cooperation: budgets become
    transmit powers, the destination keeps its cost model."""
    return ClassicalParams(
        h1_sq=params.h1 ** 2,
        h2_sq=params.h2 ** 2,
        p1=params.p_u1_budget,
        p2=params.p_u2_budget,
        n=params.n,
        n_p=params.n_p,
        eh=params.eh,
        cost=params.cost_dest,
    )


def _classical_best(params: CoopParams, mu1, mu2, cache):
    """Best weighted point over the classical MDRBs (vertices suffice for a
    linear objective over a polygonal region)."""
    if "curves" not in cache:
        from .classical_simul import mdrb_simultaneous
        from .classical_sic import mdrb_sic

        cp = classicalized(params)
        cache["curves"] = [mdrb_simultaneous(cp), mdrb_sic(cp)]
    best = (0.0, RatePoint(0.0, 0.0, 0.0))
    for curve in cache["curves"]:
        for pt in curve.points:
            val = mu1 * pt.r1 + mu2 * pt.r2
            if val > best[0]:
                best = (val, pt)
    return best[1]


def coop_mdrb(
    params: CoopParams,
    weights=None,
    solver: str = "general",
    scan: ScanConfig | None = None,
) -> BoundaryCurve:
    """Weighted-sum-rate sweep of the cooperative frontier.

    solver="closed" tries the linear-system shortcut first and reroutes to
    the general solver whenever the screen rejects it (in practice always;
    see module docstring).  Weight pairs whose solves come back invalid
    fall back to the best classical point and are flagged in metadata.
    """
    if solver not in ("closed", "general"):
        raise ValueError(f"unknown solver {solver!r}")
    if weights is None:
        ts = np.linspace(0.0, 1.0, 101)
        weights = [(float(t), float(1.0 - t)) for t in ts]
    cache: dict = {}
    pts, meta = [], []
    for mu1, mu2 in weights:
        if mu1 < 0 or mu2 < 0 or mu1 + mu2 <= 0:
            raise ValueError("weights must be non-negative and not both zero")
        sol = None
        if solver == "closed":
            try:
                cand = coop_solve_closed_form(params, mu1, mu2)
                if cand.cooperation_valid and cand.sum_bound_satisfied:
                    sol = cand
            except (TypeError, NonUniqueSolutionError):
                sol = None
        if sol is None:
            try:
                sol = coop_solve_general(params, mu1, mu2, scan)
            except CoopInfeasibleError:
                sol = None
        if sol is None or not sol.cooperation_valid:
            pt = _classical_best(params, mu1, mu2, cache)
            pts.append(RatePoint(pt.r1, pt.r2, pt.rho))
            meta.append(
                {"mu1": mu1, "mu2": mu2, "source": "classical", "rho": pt.rho}
            )
            continue
        pts.append(RatePoint(sol.r1, sol.r2, sol.rho))
        meta.append(
            {
                "mu1": mu1,
                "mu2": mu2,
                "source": sol.source,
                "rho": sol.rho,
                "p12": sol.alloc.p12,
                "p21": sol.alloc.p21,
                "pu1": sol.alloc.pu1,
                "pu2": sol.alloc.pu2,
                "weighted_rate": sol.weighted_rate,
            }
        )
    return upper_hull(pts, meta)
