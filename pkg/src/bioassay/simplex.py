"""Dense two-phase simplex with Bland's rule.

Solves min c.x subject to A x = b, x >= 0.  Bland's anti-cycling rule
(smallest eligible index enters; smallest basis index leaves among
ratio ties) makes termination unconditional.  Intended for the modest
constraint systems produced by summary-table feasibility checks; the
tests cross-check it against an independent LP solver.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["LPResult", "solve_lp"]

_TOL = 1e-9


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: np.ndarray | None
    objective: float | None
    unsatisfied_rows: tuple[int, ...] = ()  # rows whose artificials stay positive


def _pivot(tab, obj, basis, row, col):
    tab[row] /= tab[row, col]
    for r in range(tab.shape[0]):
        if r != row:
            f = tab[r, col]
            if f != 0.0:
                tab[r] -= f * tab[row]
    f = obj[col]
    if f != 0.0:
        obj -= f * tab[row]
    basis[row] = col


def _iterate(tab, obj, basis, allowed, tol=_TOL):
    """Bland-rule simplex iterations; returns False on unboundedness."""
    m = tab.shape[0]
    while True:
        col = -1
        for j in allowed:
            if obj[j] < -tol:
                col = j
                break
        if col < 0:
            return True
        row = -1
        best = np.inf
        for r in range(m):
            a = tab[r, col]
            if a > tol:
                ratio = tab[r, -1] / a
                if ratio < best - tol or (abs(ratio - best) <= tol and (row < 0 or basis[r] < basis[row])):
                    best = ratio
                    row = r
        if row < 0:
            return False
        _pivot(tab, obj, basis, row, col)


def solve_lp(A, b, c=None):
    """Two-phase simplex for min c.x, A x = b, x >= 0.

    With ``c`` None only feasibility is decided (the phase-1 basic
    solution is returned).  Infeasible systems report the constraint
    rows whose artificial variables remain positive at the phase-1
    optimum.
    """
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    if A.ndim != 2 or b.shape != (A.shape[0],):
        raise ValueError(f"bad system shapes: A {A.shape}, b {b.shape}")
    m, n = A.shape
    neg = b < 0
    A[neg] *= -1.0
    b[neg] *= -1.0

    tab = np.zeros((m, n + m + 1))
    tab[:, :n] = A
    tab[:, n : n + m] = np.eye(m)
    tab[:, -1] = b
    basis = list(range(n, n + m))

    # phase 1: minimize the artificial sum; reduce cost row over the basis
    obj = np.zeros(n + m + 1)
    obj[n : n + m] = 1.0
    for r in range(m):
        obj -= tab[r]
    if not _iterate(tab, obj, basis, range(n)):
        raise RuntimeError("phase-1 objective unbounded (cannot happen)")

    art_value = sum(tab[r, -1] for r in range(m) if basis[r] >= n)
    scale = max(1.0, float(np.abs(b).max()))
    if art_value > _TOL * scale * m:
        x = np.zeros(n + m)
        for r in range(m):
            x[basis[r]] = tab[r, -1]
        bad = tuple(i for i in range(m) if x[n + i] > _TOL * scale)
        return LPResult(status="infeasible", x=None, objective=None, unsatisfied_rows=bad)

    # drive zero-level artificials out of the basis; drop redundant rows
    keep = []
    for r in range(m):
        if basis[r] >= n:
            piv = next((j for j in range(n) if abs(tab[r, j]) > _TOL), None)
            if piv is None:
                continue  # all-zero row over the originals: redundant
            _pivot(tab, obj, basis, r, piv)
        keep.append(r)
    if len(keep) < m:
        tab = tab[keep]
        basis = [basis[r] for r in keep]
        m = len(keep)

    def solution():
        x = np.zeros(n)
        for r in range(m):
            if basis[r] < n:
                x[basis[r]] = tab[r, -1]
        return x

    if c is None:
        x = solution()
        return LPResult(status="optimal", x=x, objective=0.0)

    c = np.asarray(c, dtype=float)
    if c.shape != (n,):
        raise ValueError(f"cost vector has wrong length: {c.shape} vs n={n}")
    obj = np.zeros(tab.shape[1])
    obj[:n] = c
    for r in range(m):
        if obj[basis[r]] != 0.0:
            obj -= obj[basis[r]] * tab[r]
    if not _iterate(tab, obj, basis, range(n)):
        return LPResult(status="unbounded", x=None, objective=None)
    x = solution()
    return LPResult(status="optimal", x=x, objective=float(c @ x))
