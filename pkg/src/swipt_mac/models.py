"""Energy-harvesting conversion models, decoding-cost families and the
shared channel/system parameter records.

Two-user power-splitting SWIPT receiver: a fraction rho of the received RF
power feeds an energy-harvesting (EH) rectifier, the remaining (1-rho) feeds
the information decoder.  The rectifier is either a saturating logistic
circuit or an ideal linear converter; the decoder draws a power phi(R) that
is non-decreasing in the decoded rate R.

Conventions used across the package:
  * all powers in watts,
  * all rates in bits per channel use with the 1/2*log2 prefactor,
  * channel *power* gains |h|^2 for the classical records, real non-negative
    *amplitude* gains for the cooperative record (its coherent cross term
    2*h1*h2*sqrt(Pu1*Pu2) needs amplitudes).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit, logit

__all__ = [
    "UNBOUNDED",
    "ModelDomainError",
    "SaturationError",
    "NoInverseError",
    "EhModel",
    "LogisticEh",
    "LinearEh",
    "CostModel",
    "ExpCost",
    "LogCost",
    "LinCost",
    "ConstCost",
    "ClassicalParams",
    "CoopParams",
    "PowerAllocation",
    "RatePoint",
    "SolveReport",
    "eh_eval",
    "eh_inverse",
    "cost_eval",
    "cost_inverse",
]


class ModelDomainError(ValueError):
    """Input outside the physical domain of a model (e.g. negative power)."""


class SaturationError(ValueError):
    """Requested DC power at or above the rectifier's saturation ceiling."""


class NoInverseError(ValueError):
    """The model has no input producing the requested output."""


class _Unbounded:
    """Sentinel for a generalized cost inverse with no finite ceiling.

    Returned by the constant-cost family once the available power covers the
    decoding fee: every rate is then affordable and callers must cap by the
    mutual-information constraints.  Deliberately not a float so arithmetic
    with it fails loudly.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):  # pragma: no cover - cosmetic
        return "UNBOUNDED"


UNBOUNDED = _Unbounded()

_LOG2 = math.log(2.0)


def _expit_scalar(x: float) -> float:
    """Branch-stable scalar logistic, used for theta and the scalar eval path
    so that psi(0) == 0 holds bitwise (same function, same argument)."""
    if x >= 0.0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


# ---------------------------------------------------------------------------
# Energy-harvesting conversion models
# ---------------------------------------------------------------------------


class EhModel:
    """Base class for EH conversion functions psi: input RF power -> DC power."""

    def eval(self, p_in):
        raise NotImplementedError

    def inverse(self, p_dc):
        raise NotImplementedError


@dataclass(frozen=True)
class LogisticEh(EhModel):
    """Saturating rectifier: a logistic curve normalised to psi(0)=0.

    psi(p) = (Psi(p) - p_max_dc*theta) / (1 - theta), with
    Psi(p) = p_max_dc / (1 + exp(-q1*(p - q2))) and theta = 1/(1+exp(q1*q2)).

    q1 [1/W] sets the slope, q2 [W] the inflection input, p_max_dc [W] the
    saturation output.  theta is the zero-input offset; note that
    Psi(0)/p_max_dc and theta are the *same* expression expit(-q1*q2), so
    psi(0) == 0 holds bitwise, not just approximately.
    """

    q1: float
    q2: float
    p_max_dc: float
    theta: float = field(init=False)

    def __post_init__(self):
        if not (self.q1 > 0 and self.q2 >= 0 and self.p_max_dc > 0):
            raise ModelDomainError(
                "logistic EH model needs q1>0, q2>=0, p_max_dc>0"
            )
        # branch-stable scalar logistic: no overflow however large q1*q2.
        object.__setattr__(self, "theta", _expit_scalar(-self.q1 * self.q2))

    def eval(self, p_in):
        if isinstance(p_in, (float, int)):  # scalar fast path for root loops
            if p_in < 0:
                raise ModelDomainError("EH input power must be >= 0")
            raw = _expit_scalar(self.q1 * (p_in - self.q2))
            return self.p_max_dc * (raw - self.theta) / (1.0 - self.theta)
        p_in = np.asarray(p_in, dtype=float)
        if np.any(p_in < 0):
            raise ModelDomainError("EH input power must be >= 0")
        raw = expit(self.q1 * (p_in - self.q2))  # = Psi/p_max_dc
        out = self.p_max_dc * (raw - self.theta) / (1.0 - self.theta)
        return out if out.ndim else float(out)

    def inverse(self, p_dc):
        p_dc = float(p_dc)
        if p_dc < 0:
            raise ModelDomainError("DC power must be >= 0")
        if p_dc == 0.0:
            return 0.0
        if p_dc >= self.p_max_dc:
            raise SaturationError(
                f"DC power {p_dc} W is at/above the saturation "
                f"ceiling {self.p_max_dc} W"
            )
        # invert the normalisation, then the logistic
        raw = (p_dc * (1.0 - self.theta)) / self.p_max_dc + self.theta
        return self.q2 + float(logit(raw)) / self.q1

    @property
    def ceiling(self):
        """Least upper bound of psi (approached, never attained)."""
        return self.p_max_dc


@dataclass(frozen=True)
class LinearEh(EhModel):
    """Ideal converter psi(p) = eta*p (several rectifiers in parallel)."""

    eta: float

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise ModelDomainError("conversion efficiency eta must be in [0,1]")

    def eval(self, p_in):
        if isinstance(p_in, (float, int)):
            if p_in < 0:
                raise ModelDomainError("EH input power must be >= 0")
            return self.eta * float(p_in)
        p_in = np.asarray(p_in, dtype=float)
        if np.any(p_in < 0):
            raise ModelDomainError("EH input power must be >= 0")
        out = self.eta * p_in
        return out if out.ndim else float(out)

    def inverse(self, p_dc):
        p_dc = float(p_dc)
        if p_dc < 0:
            raise ModelDomainError("DC power must be >= 0")
        if p_dc == 0.0:
            return 0.0
        if self.eta == 0.0:
            raise NoInverseError("eta=0 harvests nothing; no inverse for p_dc>0")
        return p_dc / self.eta

    @property
    def ceiling(self):
        return math.inf


# ---------------------------------------------------------------------------
# Decoding-cost families
# ---------------------------------------------------------------------------


class CostModel:
    """Base class for decoding-cost functions phi(R) [W], non-decreasing,
    phi(0)=0, with a generalized inverse sup{R>=0 : phi(R) <= p}."""

    def eval(self, r):
        raise NotImplementedError

    def inverse(self, p):
        raise NotImplementedError


def _check_rate(r):
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ModelDomainError("rate must be >= 0")
    return r


def _check_power(p):
    if p < 0:
        raise ModelDomainError("power must be >= 0")
    return float(p)


@dataclass(frozen=True)
class ExpCost(CostModel):
    """Convex family phi(R) = beta*(2^(2R) - 1)."""

    beta: float

    def __post_init__(self):
        if not self.beta > 0:
            raise ModelDomainError("beta must be > 0")

    def eval(self, r):
        if isinstance(r, (float, int)):  # scalar fast path: solvers hammer this
            if r < 0:
                raise ModelDomainError("rate must be >= 0")
            return self.beta * math.expm1(2.0 * _LOG2 * r)
        r = _check_rate(r)
        out = self.beta * np.expm1(2.0 * _LOG2 * r)
        return out if out.ndim else float(out)

    def inverse(self, p):
        p = _check_power(p)
        return 0.5 * math.log1p(p / self.beta) / _LOG2


@dataclass(frozen=True)
class LogCost(CostModel):
    """Concave family phi(R) = beta*log2(2R + 1)."""

    beta: float

    def __post_init__(self):
        if not self.beta > 0:
            raise ModelDomainError("beta must be > 0")

    def eval(self, r):
        if isinstance(r, (float, int)):
            if r < 0:
                raise ModelDomainError("rate must be >= 0")
            return self.beta * math.log1p(2.0 * r) / _LOG2
        r = _check_rate(r)
        out = self.beta * np.log1p(2.0 * r) / _LOG2
        return out if out.ndim else float(out)

    def inverse(self, p):
        p = _check_power(p)
        return 0.5 * math.expm1(_LOG2 * p / self.beta)


@dataclass(frozen=True)
class LinCost(CostModel):
    """Linear family phi(R) = 2*beta*R (additive over decoded messages)."""

    beta: float

    def __post_init__(self):
        if not self.beta > 0:
            raise ModelDomainError("beta must be > 0")

    def eval(self, r):
        if isinstance(r, (float, int)):
            if r < 0:
                raise ModelDomainError("rate must be >= 0")
            return 2.0 * self.beta * r
        r = _check_rate(r)
        out = 2.0 * self.beta * r
        return out if out.ndim else float(out)

    def inverse(self, p):
        p = _check_power(p)
        return 0.5 * p / self.beta


@dataclass(frozen=True)
class ConstCost(CostModel):
    """Indicator family phi(R) = phi0 for R > 0, phi(0) = 0.

    The generalized inverse is 0 below the fee and UNBOUNDED at/above it.
    """

    phi0: float

    def __post_init__(self):
        if self.phi0 < 0:
            raise ModelDomainError("phi0 must be >= 0")

    def eval(self, r):
        if isinstance(r, (float, int)):
            if r < 0:
                raise ModelDomainError("rate must be >= 0")
            return self.phi0 if r > 0 else 0.0
        r = _check_rate(r)
        out = np.where(r > 0, self.phi0, 0.0)
        return out if out.ndim else float(out)

    def inverse(self, p):
        p = _check_power(p)
        if p < self.phi0:
            return 0.0
        return UNBOUNDED


# ---------------------------------------------------------------------------
# Module-level dispatch (the public operation surface)
# ---------------------------------------------------------------------------


def eh_eval(model: EhModel, p_in):
    """Harvested DC power psi(p_in). Vectorizes over p_in."""
    return model.eval(p_in)


def eh_inverse(model: EhModel, p_dc):
    """Unique input power with psi(p_in) = p_dc (scalar)."""
    return model.inverse(p_dc)


def cost_eval(model: CostModel, r):
    """Decoding power phi(r). Vectorizes over r."""
    return model.eval(r)


def cost_inverse(model: CostModel, p):
    """Generalized inverse sup{R >= 0 : phi(R) <= p} (scalar).

    For the constant family this is 0 or the UNBOUNDED sentinel.
    """
    return model.inverse(p)


def cost_rate_cap(model: CostModel, p_dc, cap):
    """min(cost_inverse(p_dc), cap) with sentinel handling, vectorized.

    `p_dc` is the power available for decoding, `cap` the mutual-information
    ceiling on the rate.  Broadcasting applies.  Negative available power is
    treated as 0 (nothing affordable).
    """
    p_dc = np.asarray(p_dc, dtype=float)
    cap = np.asarray(cap, dtype=float)
    p = np.maximum(p_dc, 0.0)
    if isinstance(model, ConstCost):
        out = np.where(p >= model.phi0, cap, 0.0)
    elif isinstance(model, ExpCost):
        out = np.minimum(0.5 * np.log1p(p / model.beta) / _LOG2, cap)
    elif isinstance(model, LogCost):
        out = np.minimum(0.5 * np.expm1(_LOG2 * p / model.beta), cap)
    elif isinstance(model, LinCost):
        out = np.minimum(0.5 * p / model.beta, cap)
    else:  # pragma: no cover - future families
        out = np.minimum(
            np.vectorize(lambda x: model.inverse(x))(p), cap
        )
    out = np.where(p_dc < 0, 0.0, out)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Parameter and result records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassicalParams:
    """Two transmitters -> one PS-SWIPT destination.

    h1_sq, h2_sq are channel *power* gains; p1, p2 transmit powers [W];
    n the antenna noise, n_p the processing noise added after the split [W].
    """

    h1_sq: float
    h2_sq: float
    p1: float
    p2: float
    n: float
    n_p: float
    eh: EhModel
    cost: CostModel

    def __post_init__(self):
        if not (self.h1_sq > 0 and self.h2_sq > 0):
            raise ModelDomainError("channel power gains must be > 0")
        if min(self.p1, self.p2, self.n) < 0:
            raise ModelDomainError("powers must be >= 0")
        if not self.n_p > 0:
            raise ModelDomainError("processing noise n_p must be > 0")

    @property
    def a(self):
        """Total received power at the destination antenna [W]."""
        return self.h1_sq * self.p1 + self.h2_sq * self.p2 + self.n

    @property
    def n_u(self):
        """Interference-plus-noise seen by user 1 when decoded first [W]."""
        return self.h2_sq * self.p2 + self.n

    def swapped(self):
        """The same channel with the user labels exchanged."""
        return ClassicalParams(
            h1_sq=self.h2_sq,
            h2_sq=self.h1_sq,
            p1=self.p2,
            p2=self.p1,
            n=self.n,
            n_p=self.n_p,
            eh=self.eh,
            cost=self.cost,
        )


@dataclass(frozen=True)
class CoopParams:
    """Two cooperating users -> one PS-SWIPT destination.

    h1, h2 are real non-negative *amplitude* gains to the destination;
    h12/h21 the inter-user amplitudes; n1/n2 the user receiver noises;
    n/n_p destination antenna/processing noise; p_u*_budget the per-user
    source power budgets.  Each receiving node has its own decoding-cost
    model.
    """

    h1: float
    h2: float
    h12: float
    h21: float
    n1: float
    n2: float
    n: float
    n_p: float
    p_u1_budget: float
    p_u2_budget: float
    eh: EhModel
    cost_dest: CostModel
    cost_user1: CostModel
    cost_user2: CostModel

    def __post_init__(self):
        if min(self.h1, self.h2) < 0:
            raise ModelDomainError("destination amplitude gains must be >= 0")
        if not (self.h12 > 0 and self.h21 > 0 and self.n1 > 0 and self.n2 > 0):
            raise ModelDomainError("user-user links need h12,h21,n1,n2 > 0")
        if min(self.p_u1_budget, self.p_u2_budget, self.n) < 0:
            raise ModelDomainError("powers must be >= 0")
        if not self.n_p > 0:
            raise ModelDomainError("processing noise n_p must be > 0")

    @property
    def b(self):
        """SNR slope of the user1 -> user2 link [1/W]."""
        return self.h12 ** 2 / self.n2

    @property
    def c(self):
        """SNR slope of the user2 -> user1 link [1/W]."""
        return self.h21 ** 2 / self.n1

    def swapped(self):
        """The same network with the user labels exchanged."""
        return CoopParams(
            h1=self.h2,
            h2=self.h1,
            h12=self.h21,
            h21=self.h12,
            n1=self.n2,
            n2=self.n1,
            n=self.n,
            n_p=self.n_p,
            p_u1_budget=self.p_u2_budget,
            p_u2_budget=self.p_u1_budget,
            eh=self.eh,
            cost_dest=self.cost_dest,
            cost_user1=self.cost_user2,
            cost_user2=self.cost_user1,
        )


@dataclass(frozen=True)
class PowerAllocation:
    """Cooperative split: p12/p21 fresh-message powers, pu1/pu2 common."""

    p12: float
    p21: float
    pu1: float
    pu2: float

    def min_power(self):
        return min(self.p12, self.p21, self.pu1, self.pu2)


@dataclass(frozen=True)
class RatePoint:
    """An achievable rate pair and the PS factor that achieves it."""

    r1: float
    r2: float
    rho: float


@dataclass
class SolveReport:
    """Output of a 1-D sum-rate optimizer.

    candidates holds (location, value, label) triples actually examined;
    residuals maps named equality/feasibility conditions to signed values;
    notes carries solver provenance flags (relabeling, grid size, ...).
    """

    rho_opt: float
    sum_rate: float
    residuals: dict
    bound: float | None = None
    candidates: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)
