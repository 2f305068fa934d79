"""Convex-concave training of morphological perceptrons and of the DEP mixing weight.

For a unit psi_u (erosion or dilation) the trained weights minimise

    J(u) = 1/|N| sum_N nu_i max(0, psi_u(x_i))
         + 1/|P| sum_P nu_i max(0, -psi_u(x_i))
         + C ||u - r||_1 .

One side of the constraints is convex in u and is kept exactly (one affine
row per coordinate); the other side is replaced, at every outer iteration,
by the affine piece that is active at the current iterate. Each subproblem
is an LP and the true objective never increases from one iterate to the next.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import DataError, DimensionError, SolverError, TrainingError
from .lattice import DepModel, Kind, MorphUnit
from .lp import LinearProgram, solve_lp

log = logging.getLogger(__name__)

LAMBDA_CAP = 1e12
_MEAN_EPS = 1e-12


@dataclass(frozen=True)
class CcpConfig:
    regularization_C: float = 1e-2
    max_outer_iters: int = 50
    objective_tol: float = 1e-6
    lp_method: str = "auto"

    def __post_init__(self):
        if not self.regularization_C > 0:
            raise ValueError("regularization_C must be positive")
        if self.max_outer_iters < 1:
            raise ValueError("max_outer_iters must be at least 1")
        if not self.objective_tol > 0:
            raise ValueError("objective_tol must be positive")


@dataclass(frozen=True)
class TrainingSet:
    """Samples with labels in {-1, +1}."""

    X: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        X = np.atleast_2d(np.asarray(self.X, dtype=float))
        d = np.asarray(self.d).astype(int).ravel()
        if X.shape[0] != d.size:
            raise DimensionError("samples and labels differ in length")
        if not np.all(np.isin(d, (-1, 1))):
            raise DataError("labels must be -1 or +1")
        if not np.all(np.isfinite(X)):
            raise DataError("features must be finite")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "d", d)

    @property
    def negatives(self) -> np.ndarray:
        return self.X[self.d == -1]

    @property
    def positives(self) -> np.ndarray:
        return self.X[self.d == 1]

    @property
    def dim(self) -> int:
        return self.X.shape[1]

    def require_both_classes(self):
        if not (np.any(self.d == -1) and np.any(self.d == 1)):
            raise DataError("both classes must be non-empty")


@dataclass(frozen=True)
class SlackWeights:
    nu_neg: np.ndarray
    nu_pos: np.ndarray


def _class_weights(Xc: np.ndarray) -> np.ndarray:
    dist = np.linalg.norm(Xc - Xc.mean(axis=0), axis=1)
    lam = np.full(dist.shape, LAMBDA_CAP)
    far = dist >= _MEAN_EPS
    lam[far] = 1.0 / dist[far]
    return lam / lam.max()


def slack_weights(t: TrainingSet) -> SlackWeights:
    """Reciprocal distance to the class mean, scaled so each class peaks at 1."""
    t.require_both_classes()
    return SlackWeights(_class_weights(t.negatives), _class_weights(t.positives))


def reference_vector(kind: Kind, t: TrainingSet) -> np.ndarray:
    """-sup(N) for dilations and -inf(P) for erosions."""
    if kind == "dilation":
        Xc = t.negatives
    elif kind == "erosion":
        Xc = t.positives
    else:
        raise ValueError(f"unknown unit kind {kind!r}")
    if Xc.shape[0] == 0:
        raise DataError(f"reference for a {kind} needs a non-empty class")
    return -(Xc.max(axis=0) if kind == "dilation" else Xc.min(axis=0))


def ccp_objective(kind: Kind, u, t: TrainingSet, nu: SlackWeights, r, C: float) -> float:
    """True (non-linearised) training objective J(u)."""
    u = np.asarray(u, float)
    reduce = np.max if kind == "dilation" else np.min
    psi_n = reduce(t.negatives + u, axis=1)
    psi_p = reduce(t.positives + u, axis=1)
    return float(
        np.mean(nu.nu_neg * np.maximum(0.0, psi_n))
        + np.mean(nu.nu_pos * np.maximum(0.0, -psi_p))
        + C * np.abs(u - r).sum()
    )


def _subproblem(kind: Kind, u_lin, Xn, Xp, nu: SlackWeights, r, C) -> LinearProgram:
    """LP over z = (u, s_neg, s_pos, a) linearised at ``u_lin``."""
    n = r.size
    kn, kp = Xn.shape[0], Xp.shape[0]
    off_sn, off_sp, off_a = n, n + kn, n + kn + kp
    n_var = off_a + n

    c = np.zeros(n_var)
    c[off_sn:off_sp] = nu.nu_neg / kn
    c[off_sp:off_a] = nu.nu_pos / kp
    c[off_a:] = C

    rows, cols, vals, rhs = [], [], [], []
    row = 0

    def add_rows(n_new, u_idx, u_sign, s_idx, a_idx=None, b=None):
        nonlocal row
        ridx = row + np.arange(n_new)
        rows.extend([ridx, ridx])
        cols.extend([u_idx, s_idx])
        vals.extend([np.full(n_new, u_sign), np.full(n_new, -1.0)])
        rhs.append(b)
        row += n_new

    # L1 surrogate: +-(u_j - r_j) <= a_j
    for sign in (1.0, -1.0):
        add_rows(n, np.arange(n), sign, off_a + np.arange(n), b=sign * r)

    if kind == "dilation":
        # Exact on N: u_j + x_ij <= s_i for all j.
        add_rows(kn * n, np.tile(np.arange(n), kn), 1.0,
                 off_sn + np.repeat(np.arange(kn), n), b=-Xn.ravel())
        # Linearised on P: u_k + x_ik >= -s_i with k the active maximiser.
        k = np.argmax(Xp + u_lin, axis=1)
        add_rows(kp, k, -1.0, off_sp + np.arange(kp), b=Xp[np.arange(kp), k])
    else:
        # Exact on P: u_j + x_ij >= -s_i for all j.
        add_rows(kp * n, np.tile(np.arange(n), kp), -1.0,
                 off_sp + np.repeat(np.arange(kp), n), b=Xp.ravel())
        # Linearised on N: u_k + x_ik <= s_i with k the active minimiser.
        k = np.argmin(Xn + u_lin, axis=1)
        add_rows(kn, k, 1.0, off_sn + np.arange(kn), b=-Xn[np.arange(kn), k])

    A = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(row, n_var),
    )
    bounds = np.zeros((n_var, 2))
    bounds[:, 1] = np.inf
    bounds[:n, 0] = -np.inf
    return LinearProgram(c, A, np.concatenate(rhs), bounds)


@dataclass(frozen=True)
class CcpTrace:
    unit: MorphUnit
    objective: float
    history: list[float] = field(default_factory=list)  # best objective after each iterate
    iterations: int = 0


def ccp_minimize(kind: Kind, t: TrainingSet, cfg: CcpConfig = CcpConfig()) -> CcpTrace:
    t.require_both_classes()
    if kind not in ("erosion", "dilation"):
        raise ValueError(f"unknown unit kind {kind!r}")
    nu = slack_weights(t)
    r = reference_vector(kind, t)
    C = cfg.regularization_C
    Xn, Xp = t.negatives, t.positives

    u = r.copy()
    best_u, best_J = u, ccp_objective(kind, u, t, nu, r, C)
    history = [best_J]
    prev_J = best_J
    it = 0
    for it in range(1, cfg.max_outer_iters + 1):
        lp = _subproblem(kind, u, Xn, Xp, nu, r, C)
        try:
            sol = solve_lp(lp, cfg.lp_method)
        except SolverError as exc:
            raise TrainingError(f"LP failure at outer iteration {it}: {exc}", iteration=it) from exc
        if sol.status != "optimal":
            raise TrainingError(f"LP subproblem reported {sol.status} at outer iteration {it}",
                                iteration=it)
        u = sol.x[: r.size].copy()
        J = ccp_objective(kind, u, t, nu, r, C)
        if J < best_J:
            best_u, best_J = u, J
        history.append(best_J)
        log.debug("%s iter %d: J=%.6g best=%.6g", kind, it, J, best_J)
        if prev_J - J < cfg.objective_tol:
            break
        prev_J = J
    return CcpTrace(MorphUnit(kind, best_u), best_J, history, it)


def train_morph_unit(kind: Kind, t: TrainingSet, cfg: CcpConfig = CcpConfig()) -> MorphUnit:
    return ccp_minimize(kind, t, cfg).unit


def hinge_loss(beta, eps, dil, d) -> np.ndarray:
    """H(beta) = sum_i max(0, -d_i (beta*dil_i + (1-beta)*eps_i)) for an array of betas."""
    beta = np.atleast_1d(np.asarray(beta, float))[:, None]
    tau = beta * dil[None, :] + (1.0 - beta) * eps[None, :]
    return np.maximum(0.0, -d[None, :] * tau).sum(axis=1)


def fit_beta(m_unit: MorphUnit, w_unit: MorphUnit, t: TrainingSet) -> float:
    """Exact minimiser of the piecewise-linear hinge loss over [0, 1] (smallest on ties)."""
    if t.X.shape[0] == 0:
        raise DataError("empty training set")
    if m_unit.dim != t.dim or w_unit.dim != t.dim:
        raise DimensionError("unit and training-set dimensions differ")
    eps = np.min(t.X + m_unit.weights, axis=1)
    dil = np.max(t.X + w_unit.weights, axis=1)
    d = t.d.astype(float)
    gap = eps - dil
    ok = gap != 0
    bp = eps[ok] / gap[ok]
    cand = np.unique(np.concatenate([[0.0, 1.0], bp[(bp > 0) & (bp < 1)]]))
    H = hinge_loss(cand, eps, dil, d)
    return float(cand[np.flatnonzero(H == H.min())[0]])


def train_dep(t: TrainingSet, cfg: CcpConfig = CcpConfig()) -> DepModel:
    t.require_both_classes()
    m_unit = train_morph_unit("erosion", t, cfg)
    w_unit = train_morph_unit("dilation", t, cfg)
    return DepModel(m_unit, w_unit, fit_beta(m_unit, w_unit, t))
