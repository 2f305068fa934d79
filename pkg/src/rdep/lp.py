"""Linear programs of the form  min c.z  s.t.  A z <= b,  lo <= z <= hi.

Two backends share one contract:

``"simplex"``
    Dense two-phase bounded-variable primal simplex with Bland's rule.
    Intended for small problems; exact and deterministic.
``"highs"``
    :func:`scipy.optimize.linprog` with the HiGHS solver, used for the
    large, sparse subproblems produced by the morphological trainer.

``"auto"`` picks the dense simplex when ``rows * cols`` is small.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

from .errors import DimensionError, SolverError

TOL_FEAS = 1e-8
TOL_OPT = 1e-7
TOL_PIVOT = 1e-10
# Reduced-cost threshold for entering candidates.
TOL_RC = 1e-9
DENSE_SIZE_LIMIT = 40_000

Status = Literal["optimal", "infeasible", "unbounded"]


@dataclass(frozen=True)
class LinearProgram:
    c: np.ndarray
    A: np.ndarray | sp.spmatrix
    b: np.ndarray
    bounds: np.ndarray  # shape (n, 2), columns lo and hi

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float).ravel()
        n = c.size
        if n == 0:
            raise ValueError("a linear program needs at least one variable")
        A = self.A
        if A is None:
            A = np.zeros((0, n))
        if sp.issparse(A):
            A = sp.csr_matrix(A, dtype=float)
            data = A.data
        else:
            A = np.atleast_2d(np.asarray(A, dtype=float))
            if A.size == 0:
                A = A.reshape(0, n)
            data = A
        b = np.asarray(self.b if self.b is not None else np.zeros(0), dtype=float).ravel()
        if A.shape[1] != n:
            raise DimensionError(f"A has {A.shape[1]} columns but c has {n} entries")
        if A.shape[0] != b.size:
            raise DimensionError(f"A has {A.shape[0]} rows but b has {b.size} entries")
        if self.bounds is None:
            bounds = np.column_stack([np.zeros(n), np.full(n, np.inf)])
        else:
            bounds = np.array(self.bounds, dtype=float).reshape(-1, 2)
        if bounds.shape[0] != n:
            raise DimensionError(f"{bounds.shape[0]} bounds given for {n} variables")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(data)) and np.all(np.isfinite(b))):
            raise ValueError("c, A and b must be finite")
        lo, hi = bounds[:, 0], bounds[:, 1]
        if np.any(np.isnan(bounds)) or np.any(lo == np.inf) or np.any(hi == -np.inf):
            raise ValueError("invalid variable bounds")
        if np.any(lo > hi):
            raise ValueError("lower bound exceeds upper bound")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "bounds", bounds)

    @property
    def n_vars(self) -> int:
        return self.c.size

    @property
    def n_rows(self) -> int:
        return self.b.size

    def dense_A(self) -> np.ndarray:
        return self.A.toarray() if sp.issparse(self.A) else self.A


@dataclass(frozen=True)
class LpSolution:
    status: Status
    x: np.ndarray | None = None
    fun: float | None = None
    iterations: int = 0


def solve_lp(lp: LinearProgram, method: str = "auto") -> LpSolution:
    if method == "auto":
        method = "simplex" if lp.n_rows * lp.n_vars <= DENSE_SIZE_LIMIT else "highs"
    if method == "simplex":
        return _solve_dense(lp)
    if method == "highs":
        return _solve_highs(lp)
    raise ValueError(f"unknown LP method {method!r}")


def max_violation(lp: LinearProgram, x: np.ndarray) -> float:
    """Largest violation of rows or bounds at ``x`` (0 if feasible)."""
    viol = 0.0
    if lp.n_rows:
        viol = max(viol, float(np.max(lp.A @ x - lp.b)))
    viol = max(viol, float(np.max(lp.bounds[:, 0] - x)), float(np.max(x - lp.bounds[:, 1])))
    return max(viol, 0.0)


# --------------------------------------------------------------------------
# HiGHS backend


def _solve_highs(lp: LinearProgram) -> LpSolution:
    bounds = [(None if np.isinf(lo) else lo, None if np.isinf(hi) else hi) for lo, hi in lp.bounds]
    res = linprog(
        lp.c,
        A_ub=lp.A if lp.n_rows else None,
        b_ub=lp.b if lp.n_rows else None,
        bounds=bounds,
        method="highs",
        options={"primal_feasibility_tolerance": 1e-9, "dual_feasibility_tolerance": 1e-9},
    )
    if res.status == 0:
        x = np.clip(res.x, lp.bounds[:, 0], lp.bounds[:, 1])
        return LpSolution("optimal", x, float(lp.c @ x), int(getattr(res, "nit", 0)))
    if res.status == 2:
        return LpSolution("infeasible")
    if res.status == 3:
        return LpSolution("unbounded")
    raise SolverError(f"HiGHS failed: {res.message}")


# --------------------------------------------------------------------------
# Dense bounded-variable simplex


class _Tableau:
    """Tableau B^-1 [A | I | art] with nonbasic variables resting at 0 or their upper bound."""

    def __init__(self, A, b, ub):
        m, p = A.shape
        neg = b < 0
        sign = np.where(neg, -1.0, 1.0)
        n_art = int(neg.sum())
        self.n_struct = p
        self.art_start = p + m
        T = np.zeros((m, p + m + n_art))
        T[:, :p] = A * sign[:, None]
        T[np.arange(m), p + np.arange(m)] = sign
        basis = p + np.arange(m)
        art_rows = np.flatnonzero(neg)
        T[art_rows, self.art_start + np.arange(n_art)] = 1.0
        basis[art_rows] = self.art_start + np.arange(n_art)
        self.T = T
        self.basis = basis
        self.x_B = np.abs(b)
        self.ub = np.concatenate([ub, np.full(m + n_art, np.inf)])
        self.at_upper = np.zeros(T.shape[1], dtype=bool)
        self.iterations = 0

    def values(self) -> np.ndarray:
        x = np.where(self.at_upper, self.ub, 0.0)
        x[self.basis] = self.x_B
        return x

    def run(self, cost: np.ndarray, max_iter: int, allowed: np.ndarray) -> str:
        """Simplex iterations until optimal or unbounded (Bland's rule throughout)."""
        T = self.T
        while True:
            if self.iterations >= max_iter:
                raise SolverError(f"simplex iteration cap ({max_iter}) reached")
            d = cost - cost[self.basis] @ T
            is_basic = np.zeros(T.shape[1], dtype=bool)
            is_basic[self.basis] = True
            eligible = allowed & ~is_basic & np.where(self.at_upper, d > TOL_RC, d < -TOL_RC)
            cand = np.flatnonzero(eligible)
            if cand.size == 0:
                return "optimal"
            j = int(cand[0])
            direction = -1.0 if self.at_upper[j] else 1.0
            g = direction * T[:, j]
            ub_B = self.ub[self.basis]
            theta = np.full(g.size, np.inf)
            down = g > TOL_PIVOT
            up = (g < -TOL_PIVOT) & np.isfinite(ub_B)
            theta[down] = np.maximum(self.x_B[down], 0.0) / g[down]
            theta[up] = np.maximum(ub_B[up] - self.x_B[up], 0.0) / (-g[up])
            theta_row = theta.min() if theta.size else np.inf
            theta_flip = self.ub[j]
            self.iterations += 1
            if not np.isfinite(theta_row) and not np.isfinite(theta_flip):
                return "unbounded"
            if theta_flip <= theta_row:
                self.x_B = self.x_B - theta_flip * g
                self.at_upper[j] = not self.at_upper[j]
                continue
            ties = np.flatnonzero(theta <= theta_row + 1e-12 * max(1.0, theta_row))
            r = int(ties[np.argmin(self.basis[ties])])
            leaving = self.basis[r]
            self.x_B = self.x_B - theta_row * g
            entering_value = theta_row if direction > 0 else self.ub[j] - theta_row
            self.at_upper[leaving] = bool(g[r] < 0)
            self.at_upper[j] = False
            self._pivot(r, j)
            self.x_B[r] = entering_value
            np.maximum(self.x_B, 0.0, out=self.x_B)

    def _pivot(self, r: int, j: int):
        T = self.T
        T[r] /= T[r, j]
        col = T[:, j].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        self.basis[r] = j

    def drop_artificials(self):
        """Pivot zero-level artificial variables out of the basis, dropping redundant rows."""
        keep = np.ones(self.T.shape[0], dtype=bool)
        for r in range(self.T.shape[0]):
            if self.basis[r] < self.art_start:
                continue
            is_basic = np.zeros(self.T.shape[1], dtype=bool)
            is_basic[self.basis] = True
            row = np.abs(self.T[r, : self.art_start])
            row[is_basic[: self.art_start]] = 0.0
            cand = np.flatnonzero(row > 1e-9)
            if cand.size == 0:
                keep[r] = False
                continue
            j = int(cand[0])
            value = self.ub[j] if self.at_upper[j] else 0.0
            self._pivot(r, j)
            self.at_upper[j] = False
            self.x_B[r] = value
        self.T = self.T[keep][:, : self.art_start]
        self.basis = self.basis[keep]
        self.x_B = self.x_B[keep]
        self.ub = self.ub[: self.art_start]
        self.at_upper = self.at_upper[: self.art_start]


def _solve_dense(lp: LinearProgram) -> LpSolution:
    A = lp.dense_A()
    m, n = A.shape
    lo, hi = lp.bounds[:, 0], lp.bounds[:, 1]

    # Map each original variable onto columns y >= 0:  z = offset + sum(coef * y).
    cols, coefs, offsets, ubs, owner = [], [], np.zeros(n), [], []
    for j in range(n):
        if np.isfinite(lo[j]):
            offsets[j] = lo[j]
            cols.append(A[:, j])
            coefs.append(1.0)
            ubs.append(hi[j] - lo[j])
            owner.append(j)
        elif np.isfinite(hi[j]):
            offsets[j] = hi[j]
            cols.append(-A[:, j])
            coefs.append(-1.0)
            ubs.append(np.inf)
            owner.append(j)
        else:
            for s in (1.0, -1.0):
                cols.append(s * A[:, j])
                coefs.append(s)
                ubs.append(np.inf)
                owner.append(j)
    A_y = np.column_stack(cols) if m else np.zeros((0, len(cols)))
    coefs = np.array(coefs)
    owner = np.array(owner)
    c_y = lp.c[owner] * coefs
    b_y = lp.b - A @ offsets if m else np.zeros(0)

    tab = _Tableau(A_y, b_y, np.array(ubs))
    max_iter = 50 * (m + n)
    n_cols = tab.T.shape[1]

    if tab.art_start < n_cols:
        phase1 = np.zeros(n_cols)
        phase1[tab.art_start:] = 1.0
        tab.run(phase1, max_iter, np.ones(n_cols, dtype=bool))
        infeas = float(tab.values()[tab.art_start:].sum())
        if infeas > TOL_FEAS * (1.0 + float(np.max(np.abs(lp.b), initial=0.0))):
            return LpSolution("infeasible", iterations=tab.iterations)
        tab.drop_artificials()

    cost = np.concatenate([c_y, np.zeros(tab.T.shape[1] - c_y.size)])
    status = tab.run(cost, max_iter, np.ones(tab.T.shape[1], dtype=bool))
    if status == "unbounded":
        return LpSolution("unbounded", iterations=tab.iterations)
    y = tab.values()[: c_y.size]
    z = offsets.copy()
    np.add.at(z, owner, coefs * y)
    z = np.clip(z, lo, hi)
    return LpSolution("optimal", z, float(lp.c @ z), tab.iterations)
