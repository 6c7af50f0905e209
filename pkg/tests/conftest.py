"""Shared test utilities: finite-difference oracles and samplers."""

import numpy as np
import pytest

from bioassay.models import REGISTRY


def fd_gradient(model, u, theta, h_scale=1e-6):
    """Central finite-difference gradient of a model's raw mean function.

    Perturbs each non-integer parameter by h = h_scale * max(1, |theta_i|);
    integer-constrained slots are returned as 0 to mirror the analytic
    gradient's convention.
    """
    theta = np.asarray(theta, dtype=float)
    u = np.asarray(u, dtype=float)
    g = np.zeros(len(theta))
    frozen = set(model.frozen_slots)
    for i in range(len(theta)):
        if i in frozen:
            continue
        h = h_scale * max(1.0, abs(theta[i]))
        hi = theta.copy()
        lo = theta.copy()
        hi[i] += h
        lo[i] -= h
        g[i] = (model.fn(u, hi) - model.fn(u, lo)) / (2.0 * h)
    return g


def rel_err(a, b):
    """Componentwise |a - b| / max(1, |a|, |b|)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))
    return np.abs(a - b) / scale


def sample_point(model, rng):
    """Random admissible (u, theta) pair for a registry model."""
    theta = model.theta_sampler(rng)
    u = model.input_sampler(rng, theta)
    return u, theta


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


def all_models():
    return list(REGISTRY)


def integer_table_exists(row_marginals, col_marginals):
    """Exhaustive search for a nonnegative integer matrix with the given
    row and column sums (independent oracle for consistency checks).

    Recursion over rows; partial column sums prune branches that already
    overshoot a column target, and the final row is checked exactly.
    """
    rows = tuple(int(v) for v in row_marginals)
    cols = tuple(int(v) for v in col_marginals)
    if any(v < 0 for v in rows + cols):
        return False
    k = len(cols)

    def compositions(total, parts):
        if parts == 1:
            yield (total,)
            return
        for head in range(total + 1):
            for rest in compositions(total - head, parts - 1):
                yield (head, *rest)

    suffix_supply = [0] * (len(rows) + 1)
    for i in range(len(rows) - 1, -1, -1):
        suffix_supply[i] = suffix_supply[i + 1] + rows[i]

    def fill(i, col_acc):
        # remaining row supply must exactly cover the remaining column demand
        if suffix_supply[i] != sum(cols) - sum(col_acc):
            return False
        if i == len(rows):
            return col_acc == cols
        for combo in compositions(rows[i], k):
            nxt = tuple(a + b for a, b in zip(col_acc, combo))
            if all(a <= b for a, b in zip(nxt, cols)):
                if fill(i + 1, nxt):
                    return True
        return False

    return fill(0, (0,) * k)
