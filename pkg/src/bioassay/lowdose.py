"""Low-dose percentile extrapolation and conservative safe-dose bounds.

The percentile of a dose-response curve is the dose at which the
response probability reaches a target ``p``, on either the total-risk
scale F(L) = p or the extra-risk scale (F(L) - F(0)) / (1 - F(0)) = p.
Closed-form inversions are used where they exist; otherwise a monotone
bisection solves F(L) = target to |F - target| <= 1e-12.

The safe-dose bound is a delta-method lower confidence limit for the
estimated percentile: the gradient of L_p with respect to the model
parameters comes from implicit differentiation of the defining
equation.  The construction is this module's own choice and is labeled
``method = "delta"`` in its output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logit as _logit
from scipy.special import ndtri

from .exceptions import DomainError, UnattainableRiskError
from .fitting import FitResult
from .models import evaluate, get_model, gradient
from .models.base import ModelDef

__all__ = ["PercentileQuery", "VsdResult", "percentile", "percentile_gradient", "vsd_upper_limit"]

_BISECT_F_TOL = 1e-12


@dataclass(frozen=True)
class PercentileQuery:
    """A percentile request: model, parameters, target probability, risk scale.

    ``risk_type`` None picks the default: extra risk when the curve has a
    background response F(0) > 0, total risk otherwise.  The low-dose
    regime of interest is p <= 0.1, but any p in (0, 1) is accepted.
    """

    model: str | ModelDef
    theta: tuple
    p: float
    risk_type: str | None = None

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise DomainError(f"p must lie in (0, 1), got {self.p}")
        if self.risk_type not in (None, "total", "extra"):
            raise DomainError(f"risk_type must be 'total' or 'extra', got {self.risk_type!r}")


def _resolve_query(query: PercentileQuery):
    m = query.model if isinstance(query.model, ModelDef) else get_model(query.model)
    if m.family != "dose-response-cdf":
        raise DomainError(f"percentiles are defined for dose-response curves, not {m.id}")
    theta = m.check_theta(query.theta)
    f0 = evaluate(m, 0.0, theta) if m.input_low is not None else 0.0
    risk = query.risk_type
    if risk is None:
        risk = "extra" if f0 > 0.0 else "total"
    if risk == "extra":
        if f0 >= 1.0:
            raise DomainError("extra risk undefined: the background response is already 1")
        target = f0 + query.p * (1.0 - f0)
    else:
        target = query.p
        if m.input_low is not None and f0 > target:
            raise DomainError(
                f"total-risk target {target} lies below the background response F(0)={f0}; "
                "use extra risk"
            )
    return m, theta, risk, target


def _closed_form(m: ModelDef, theta: np.ndarray, target: float) -> float | None:
    if m.id == "one-hit":
        return -math.log1p(-target) / theta[0]
    if m.id == "weibull-cdf":
        return (-math.log1p(-target)) ** (1.0 / theta[1]) / theta[0]
    if m.id == "logit-cdf":
        return (_logit(target) - theta[0]) / theta[1]
    if m.id == "probit-cdf":
        return (ndtri(target) - theta[0]) / theta[1]
    return None


def _bisect(m: ModelDef, theta: np.ndarray, target: float) -> float:
    def f(x):
        return float(evaluate(m, x, theta))

    unbounded_below = m.input_low is None
    lo = 0.0
    if f(lo) == target:
        return 0.0
    if unbounded_below and f(lo) > target:
        # tolerance-scale curves extend to the whole real line
        lo = -1.0
        for _ in range(60):
            if f(lo) < target:
                break
            lo *= 2.0
        else:
            raise UnattainableRiskError("target below the attainable infimum", f(lo))
        hi = lo / 2.0 if lo < -1.0 else 0.0
    else:
        hi = 1.0
        for _ in range(60):
            if f(hi) > target:
                break
            hi *= 2.0
        else:
            raise UnattainableRiskError(
                f"target {target} exceeds the attainable response supremum "
                f"{f(hi)} (at dose {hi})",
                f(hi),
            )
    a, b = lo, hi
    for _ in range(200):
        mid = 0.5 * (a + b)
        if mid == a or mid == b:
            break
        if f(mid) < target:
            a = mid
        else:
            b = mid
    mid = 0.5 * (a + b)
    if abs(f(mid) - target) > _BISECT_F_TOL:
        raise DomainError(f"bisection stalled: |F - target| = {abs(f(mid) - target):.2e}")
    return mid


def percentile(query: PercentileQuery, method: str = "auto") -> float:
    """Dose at which the curve reaches the target probability.

    ``method`` selects the inversion path: "closed" (closed form where
    one exists), "bisect", or "auto" (closed form preferred).
    """
    m, theta, _risk, target = _resolve_query(query)
    if method not in ("auto", "closed", "bisect"):
        raise DomainError(f"unknown method {method!r}")
    if method in ("auto", "closed"):
        closed = _closed_form(m, theta, target)
        if closed is not None:
            return float(closed)
        if method == "closed":
            raise DomainError(f"no closed-form percentile for {m.id}")
    return _bisect(m, theta, target)


def _dose_slope(m: ModelDef, theta: np.ndarray, x: float) -> float:
    """dF/dx by central differences (h respects the dose domain)."""
    h = 1e-6 * max(1.0, abs(x))
    lo_bound = m.input_low if m.input_low is not None else -math.inf
    a = max(x - h, lo_bound)
    b = x + h
    fa = float(evaluate(m, a, theta))
    fb = float(evaluate(m, b, theta))
    return (fb - fa) / (b - a)


def percentile_gradient(query: PercentileQuery, method: str = "auto") -> np.ndarray:
    """Gradient of the percentile with respect to the model parameters.

    Implicit differentiation of the defining equation: on the total-risk
    scale dL/dtheta_j = -F_theta_j(L) / F'(L); the extra-risk scale adds
    the background terms -(1-p) F_theta_j(0).
    """
    m, theta, risk, _target = _resolve_query(query)
    lp = percentile(query, method=method)
    g_l = np.asarray(gradient(m, lp, theta), dtype=float)
    slope = _dose_slope(m, theta, lp)
    if slope <= 0:
        raise DomainError("dose-response slope vanishes at the percentile")
    if risk == "extra" and m.input_low is not None and evaluate(m, 0.0, theta) > 0.0:
        # background correction; vanishes identically when F(0) = 0
        g_0 = np.asarray(gradient(m, 0.0, theta), dtype=float)
        g_l = g_l - (1.0 - query.p) * g_0
    return -g_l / slope


@dataclass(frozen=True)
class VsdResult:
    """Delta-method lower confidence bound for an estimated percentile."""

    lp: float
    vsd: float
    se: float
    confidence: float
    risk_type: str
    clamped: bool
    method: str = "delta"


def vsd_upper_limit(query: PercentileQuery, fit: FitResult, confidence: float) -> VsdResult:
    """Conservative dose bound: L_p minus a normal quantile of its SE.

    The percentile and its gradient are evaluated at the fitted
    parameters ``fit.theta_hat`` (the query's theta is superseded by the
    estimate); the variance comes from the inverse information in
    ``fit.info``.  The lower dose bound is the conservative direction
    and is clamped at zero (flagged) if the interval crosses it.
    """
    if not 0.5 <= confidence < 1.0:
        raise DomainError(f"confidence must lie in [0.5, 1), got {confidence}")
    if fit.info is None:
        raise DomainError("fit carries no information matrix")
    at_fit = PercentileQuery(
        model=query.model, theta=tuple(fit.theta_hat), p=query.p, risk_type=query.risk_type
    )
    m, _theta, risk, _target = _resolve_query(at_fit)
    lp = percentile(at_fit)
    g = percentile_gradient(at_fit)
    cov = fit.info.covariance()
    var = float(g @ cov @ g)
    if var < 0:
        raise DomainError("information matrix is not positive definite")
    se = math.sqrt(var)
    z = float(ndtri(confidence))
    vsd = lp - z * se
    clamped = vsd < 0.0
    if clamped:
        vsd = 0.0
    return VsdResult(lp=lp, vsd=vsd, se=se, confidence=confidence, risk_type=risk, clamped=clamped)
