"""Fisher information for mean-response models.

Per observation the information matrix is the scaled outer product of the
analytic parameter gradient, i(theta) = grad f . grad f^T / sigma^2; a
design contributes additively, so the total information is the sum over
its points.  For the censored Weibull fit the module also provides the
closed-form second-derivative matrix of the log-likelihood.

:mod:`bioassay.fisher_reference` holds hand-tabulated closed forms that
cross-check the outer-product computation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError
from .models import gradient
from .models.base import ModelDef

__all__ = [
    "InfoMatrix",
    "WeibullSample",
    "per_obs_info",
    "total_info",
    "info_at_estimate",
    "weibull_observed_info",
]


@dataclass(frozen=True)
class InfoMatrix:
    """A symmetric information matrix together with its variance scale."""

    entries: np.ndarray
    sigma2: float

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=float)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise DomainError(f"information matrix must be square, got {entries.shape}")
        if not np.allclose(entries, entries.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(entries).max())):
            raise DomainError("information matrix must be symmetric")
        if not self.sigma2 > 0:
            raise DomainError(f"sigma2 must be > 0, got {self.sigma2}")
        object.__setattr__(self, "entries", entries)

    @property
    def p(self) -> int:
        return self.entries.shape[0]

    def covariance(self) -> np.ndarray:
        """Inverse of the information matrix (asymptotic covariance)."""
        try:
            return np.linalg.inv(self.entries)
        except np.linalg.LinAlgError:
            raise DomainError("information matrix is singular") from None

    def standard_errors(self) -> np.ndarray:
        """Square roots of the covariance diagonal."""
        diag = np.diag(self.covariance())
        if np.any(diag < 0):
            raise DomainError("information matrix is not positive definite")
        return np.sqrt(diag)

    def __array__(self, dtype=None):
        return np.asarray(self.entries, dtype=dtype)


def per_obs_info(model: ModelDef | str, u, theta, sigma2: float = 1.0) -> InfoMatrix:
    """Single-observation information: outer product of the gradient / sigma2.

    Rank <= 1 and positive semidefinite by construction.
    """
    if not sigma2 > 0:
        raise DomainError(f"sigma2 must be > 0, got {sigma2}")
    g = gradient(model, u, theta)
    if g.ndim != 1:
        raise DomainError("per-observation information takes a single design point")
    return InfoMatrix(np.outer(g, g) / sigma2, sigma2)


def total_info(model: ModelDef | str, design, theta, sigma2: float = 1.0) -> InfoMatrix:
    """Additive information over a design (sequence of input points)."""
    design = list(design)
    if not design:
        raise DomainError("design must contain at least one point")
    acc = None
    for u in design:
        m = per_obs_info(model, u, theta, sigma2).entries
        acc = m if acc is None else acc + m
    return InfoMatrix(acc, sigma2)


def info_at_estimate(model: ModelDef | str, design, theta_hat, s2: float) -> InfoMatrix:
    """Total information at the fitted parameters with s^2 plugged in for sigma^2."""
    if s2 is None or not s2 > 0:
        raise DomainError("a positive residual variance estimate s2 is required")
    return total_info(model, design, theta_hat, s2)


@dataclass(frozen=True)
class WeibullSample:
    """Event/censoring times for the two-parameter Weibull fit.

    ``times`` must be strictly positive; ``event_flags`` marks observed
    events with 1 and right-censored observations with 0.
    """

    times: np.ndarray
    event_flags: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        flags = np.asarray(self.event_flags, dtype=int)
        if times.ndim != 1 or times.size == 0:
            raise DomainError("times must be a nonempty 1-D sequence")
        if np.any(times <= 0) or not np.all(np.isfinite(times)):
            raise DomainError("all times must be finite and strictly positive")
        if flags.shape != times.shape:
            raise DomainError("event_flags must match times in length")
        if not np.all((flags == 0) | (flags == 1)):
            raise DomainError("event_flags must be 0 (censored) or 1 (event)")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "event_flags", flags)

    @classmethod
    def all_events(cls, times) -> "WeibullSample":
        times = np.asarray(times, dtype=float)
        return cls(times, np.ones(times.shape, dtype=int))

    @property
    def n(self) -> int:
        return self.times.size

    @property
    def d(self) -> int:
        """Number of observed events."""
        return int(self.event_flags.sum())


def weibull_observed_info(sample: WeibullSample, theta: float, s: float, negate: bool = False) -> np.ndarray:
    """Second derivatives of the censored-Weibull log-likelihood at (theta, s).

    Returns the Hessian [[l_tt, l_ts], [l_ts, l_ss]] (negative definite
    near the maximum).  Pass ``negate=True`` for the conventional
    positive-semidefinite observed information used for standard errors.
    """
    if not theta > 0 or not s > 0:
        raise DomainError("theta and s must both be > 0")
    if sample.n == 0:
        raise DomainError("sample must be nonempty")
    t = sample.times
    d = sample.d
    ts = t**s
    sum_ts = ts.sum()
    log_t = np.log(t)
    itt = -s * d / theta**2 - s * (s - 1.0) * theta ** (s - 2.0) * sum_ts
    its = (
        d / theta
        - theta ** (s - 1.0) * (1.0 + s * np.log(theta)) * sum_ts
        - s * theta ** (s - 1.0) * (ts * log_t).sum()
    )
    iss = -d / s**2 - theta**s * (ts * np.log(theta * t) ** 2).sum()
    h = np.array([[itt, its], [its, iss]])
    return -h if negate else h
