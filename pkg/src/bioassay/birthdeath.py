"""Linear birth-death clonal simulation and empirical hazard estimation.

At population i the total event rate is i*(b + d): exponential waiting
times, each event a birth with probability b/(b+d).  The simulation is
exact and event-driven; replicate RNG streams derive deterministically
from (seed, replicate index).

First-event times for hazard studies are defined by a population
threshold: extinction studies use no threshold and record extinction,
onset studies record the first passage of a configurable cell count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError

__all__ = [
    "BirthDeathSpec",
    "Trajectory",
    "Replicate",
    "simulate_bd",
    "simulate_replicates",
    "empirical_hazard",
    "ad_hazard_fit",
]

MAX_POPULATION = 100_000_000


@dataclass(frozen=True)
class BirthDeathSpec:
    """Per-cell birth/death rates, initial count, horizon, and RNG seed."""

    b: float
    d: float
    i0: int = 1
    t_end: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.b < 0 or self.d < 0:
            raise DomainError("rates must be nonnegative")
        if self.b == 0 and self.d == 0:
            raise DomainError("at least one of b, d must be positive")
        if self.i0 < 1 or self.i0 != int(self.i0):
            raise DomainError(f"initial population must be an integer >= 1, got {self.i0}")
        if not self.t_end > 0:
            raise DomainError(f"t_end must be > 0, got {self.t_end}")


@dataclass(frozen=True)
class Trajectory:
    """Event times and population sizes, starting from (0, i0)."""

    times: np.ndarray
    populations: np.ndarray
    extinct: bool
    truncated: bool
    t_end: float

    @property
    def extinction_time(self) -> float | None:
        return float(self.times[-1]) if self.extinct else None

    @property
    def final_population(self) -> int:
        return int(self.populations[-1])


def _rng_for(seed: int, replicate: int | None = None):
    key = (int(seed),) if replicate is None else (int(seed), int(replicate))
    return np.random.default_rng(key)


def _run(spec: BirthDeathSpec, rng, threshold: int | None, max_population: int, record: bool):
    t = 0.0
    pop = int(spec.i0)
    total = spec.b + spec.d
    p_birth = spec.b / total
    times = [0.0]
    pops = [pop]
    truncated = False
    hit_time = None
    if threshold is not None and pop >= threshold:
        hit_time = 0.0
    while pop > 0 and hit_time is None:
        dt = rng.exponential(1.0 / (pop * total))
        if t + dt > spec.t_end:
            t = spec.t_end
            break
        t += dt
        pop += 1 if rng.random() < p_birth else -1
        if record:
            times.append(t)
            pops.append(pop)
        if threshold is not None and pop >= threshold:
            hit_time = t
        if pop > max_population:
            truncated = True
            break
    return t, pop, times, pops, truncated, hit_time


def simulate_bd(spec: BirthDeathSpec, max_population: int = MAX_POPULATION) -> Trajectory:
    """One exact trajectory; deterministic for a fixed seed.

    Stops at extinction or the horizon; a population beyond
    ``max_population`` stops the run with the truncation flag set
    (explosion guard).
    """
    rng = _rng_for(spec.seed)
    _t, pop, times, pops, truncated, _hit = _run(spec, rng, None, max_population, record=True)
    return Trajectory(
        times=np.asarray(times),
        populations=np.asarray(pops, dtype=int),
        extinct=pop == 0,
        truncated=truncated,
        t_end=spec.t_end,
    )


@dataclass(frozen=True)
class Replicate:
    index: int
    outcome: str  # "extinct" | "onset" | "censored" | "truncated"
    time: float


def simulate_replicates(
    spec: BirthDeathSpec,
    n_replicates: int,
    threshold: int | None = None,
    max_population: int = MAX_POPULATION,
) -> list[Replicate]:
    """Independent replicates with per-replicate RNG streams.

    With ``threshold`` None the recorded event is extinction; otherwise
    it is the first time the population reaches the threshold.  Runs
    that see neither by the horizon are censored at t_end.
    """
    if n_replicates < 1:
        raise DomainError("n_replicates must be >= 1")
    if threshold is not None and threshold < 1:
        raise DomainError("threshold must be >= 1")
    out = []
    for i in range(n_replicates):
        rng = _rng_for(spec.seed, i)
        t, pop, _times, _pops, truncated, hit = _run(spec, rng, threshold, max_population, record=False)
        if threshold is not None and hit is not None:
            rep = Replicate(i, "onset", hit)
        elif pop == 0:
            rep = Replicate(i, "extinct", t)
        elif truncated:
            rep = Replicate(i, "truncated", t)
        else:
            rep = Replicate(i, "censored", spec.t_end)
        out.append(rep)
    return out


def empirical_hazard(event_times, bins: int, t_range: tuple[float, float] | None = None):
    """Binned hazard estimate: events / (at risk at the bin start * width).

    Returns (midpoints, rates) for bins with someone at risk.
    """
    times = np.sort(np.asarray(event_times, dtype=float))
    if times.size == 0:
        raise DomainError("no event times supplied")
    if bins < 1:
        raise DomainError("bins must be >= 1")
    lo, hi = t_range if t_range is not None else (0.0, float(times.max()))
    if not hi > lo:
        raise DomainError(f"empty time range ({lo}, {hi})")
    edges = np.linspace(lo, hi, bins + 1)
    width = edges[1] - edges[0]
    mids = []
    rates = []
    for j in range(bins):
        left, right = edges[j], edges[j + 1]
        at_risk = int(np.sum(times >= left))
        if at_risk == 0:
            continue
        if j == bins - 1:
            events = int(np.sum((times >= left) & (times <= right)))
        else:
            events = int(np.sum((times >= left) & (times < right)))
        mids.append(0.5 * (left + right))
        rates.append(events / (at_risk * width))
    return np.asarray(mids), np.asarray(rates)


def ad_hazard_fit(event_times, k: int, t0: float = 0.0) -> float:
    """Rate-scale MLE for the power-law hazard c*(t - t0)**(k-1) with k, t0 fixed.

    The implied cumulative hazard c*(t-t0)^k / k gives the closed form
    c = n*k / sum (t_i - t0)^k; with k = 1 this is the exponential-rate MLE.
    """
    times = np.asarray(event_times, dtype=float)
    if times.size == 0:
        raise DomainError("no event times supplied")
    if k < 1 or k != int(k):
        raise DomainError(f"stage count k must be an integer >= 1, got {k}")
    if np.any(times <= t0):
        raise DomainError(f"all event times must exceed the lag t0 = {t0}")
    return float(times.size * k / np.sum((times - t0) ** k))
