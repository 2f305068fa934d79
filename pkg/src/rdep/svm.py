"""Soft-margin kernel support vector classifiers trained by SMO.

The dual solved is

    min_a  1/2 sum_ij a_i a_j d_i d_j k(x_i, x_j) - sum_i a_i
    s.t.   sum_i a_i d_i = 0,   0 <= a_i <= C

using the maximal-violating-pair working set and the two-variable analytic
update (as in LIBSVM). The full Gram matrix is cached.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Literal

import numpy as np

from .errors import DimensionError, TrainingError
from .lattice import as_points

KernelKind = Literal["linear", "gaussian", "polynomial"]

KKT_TOL = 1e-3
SV_TOL = 1e-12
_TAU = 1e-12


@dataclass(frozen=True)
class KernelSpec:
    """Kernel definition.

    linear      <x, y>
    gaussian    exp(-||x - y||^2 / (2 sigma^2))
    polynomial  (gamma <x, y>)^d      (gamma = 1 gives the plain <x, y>^d)

    Width parameters left as ``None`` are resolved from the training data
    with g = 1 / (n_features * var(X)): sigma^2 = 1 / (2 g) and gamma = g.
    """

    kind: KernelKind = "gaussian"
    gaussian_sigma2: float | None = None
    poly_degree: int = 3
    poly_gamma: float | None = None

    def __post_init__(self):
        if self.kind not in ("linear", "gaussian", "polynomial"):
            raise ValueError(f"unknown kernel {self.kind!r}")
        if self.gaussian_sigma2 is not None and not self.gaussian_sigma2 > 0:
            raise ValueError("gaussian_sigma2 must be positive")
        if int(self.poly_degree) != self.poly_degree or self.poly_degree < 1:
            raise ValueError("poly_degree must be a positive integer")
        if self.poly_gamma is not None and not self.poly_gamma > 0:
            raise ValueError("poly_gamma must be positive")

    @property
    def is_resolved(self) -> bool:
        if self.kind == "gaussian":
            return self.gaussian_sigma2 is not None
        if self.kind == "polynomial":
            return self.poly_gamma is not None
        return True

    def resolved(self, X: np.ndarray) -> "KernelSpec":
        if self.is_resolved:
            return self
        var = float(np.var(X))
        g = 1.0 / (X.shape[1] * var) if var > 0 else 1.0
        if self.kind == "gaussian":
            return replace(self, gaussian_sigma2=1.0 / (2.0 * g))
        return replace(self, poly_gamma=g)


LINEAR = KernelSpec("linear")
GAUSSIAN = KernelSpec("gaussian")
POLY3 = KernelSpec("polynomial", poly_degree=3)


def gram(spec: KernelSpec, X, Y) -> np.ndarray:
    """Kernel matrix k(X[i], Y[j])."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    if X.shape[1] != Y.shape[1]:
        raise DimensionError(f"dimension mismatch: {X.shape[1]} vs {Y.shape[1]}")
    if spec.kind == "linear":
        return X @ Y.T
    if not spec.is_resolved:
        raise ValueError(f"{spec.kind} kernel width is unresolved")
    if spec.kind == "polynomial":
        return (spec.poly_gamma * (X @ Y.T)) ** spec.poly_degree
    sq = (X * X).sum(1)[:, None] + (Y * Y).sum(1)[None, :] - 2.0 * (X @ Y.T)
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-sq / (2.0 * spec.gaussian_sigma2))


def kernel_eval(spec: KernelSpec, x, y) -> float:
    x = as_points(x)
    y = as_points(y)
    if x.ndim != 1 or y.ndim != 1:
        raise DimensionError("kernel_eval takes two vectors")
    if x.size != y.size:
        raise DimensionError(f"dimension mismatch: {x.size} vs {y.size}")
    if spec.kind == "linear":
        return float(x @ y)
    if not spec.is_resolved:
        raise ValueError(f"{spec.kind} kernel width is unresolved")
    if spec.kind == "polynomial":
        return (spec.poly_gamma * float(x @ y)) ** spec.poly_degree
    diff = x - y
    return float(np.exp(-(diff @ diff) / (2.0 * spec.gaussian_sigma2)))


@dataclass(frozen=True)
class SvcModel:
    support_vectors: np.ndarray  # (s, n)
    dual_coef: np.ndarray  # alpha_i * d_i for each support vector
    intercept: float
    kernel: KernelSpec
    box_C: float
    n_iter: int = 0

    @property
    def dim(self) -> int:
        return self.support_vectors.shape[1]


def train_svc(X, d, spec: KernelSpec = GAUSSIAN, box_C: float = 1.0,
              kkt_tol: float = KKT_TOL, max_iter: int | None = None,
              return_alpha: bool = False):
    """Fit a binary SVC on labels ``d`` in {-1, +1}.

    With ``return_alpha=True`` the full dual vector is returned as well, which
    the tests use to check the KKT conditions on every training point.
    """
    X = as_points(X)
    X = np.atleast_2d(X)
    d = np.asarray(d, dtype=float).ravel()
    if d.size != X.shape[0]:
        raise DimensionError("labels and samples differ in length")
    if not np.all(np.isin(d, (-1.0, 1.0))):
        raise ValueError("labels must be -1 or +1")
    if not (np.any(d > 0) and np.any(d < 0)):
        raise ValueError("both classes must be present")
    if not box_C > 0:
        raise ValueError("box_C must be positive")
    spec = spec.resolved(X)
    m = X.shape[0]
    max_iter = 10_000 * m if max_iter is None else max_iter
    C = float(box_C)

    Q = gram(spec, X, X) * np.outer(d, d)
    QD = np.diag(Q).copy()
    alpha = np.zeros(m)
    G = -np.ones(m)
    pos = d > 0
    neg = ~pos

    converged = False
    it = 0
    while it < max_iter:
        yG = -d * G
        up = (pos & (alpha < C)) | (neg & (alpha > 0))
        low = (pos & (alpha > 0)) | (neg & (alpha < C))
        i = int(np.argmax(np.where(up, yG, -np.inf)))
        j = int(np.argmin(np.where(low, yG, np.inf)))
        if yG[i] - yG[j] < kkt_tol:
            converged = True
            break
        it += 1
        ai, aj = alpha[i], alpha[j]
        if d[i] != d[j]:
            quad = max(QD[i] + QD[j] + 2.0 * Q[i, j], _TAU)
            delta = (-G[i] - G[j]) / quad
            diff = ai - aj
            ni, nj = ai + delta, aj + delta
            if diff > 0:
                if nj < 0:
                    nj, ni = 0.0, diff
            elif ni < 0:
                ni, nj = 0.0, -diff
            if diff > 0:
                if ni > C:
                    ni, nj = C, C - diff
            elif nj > C:
                nj, ni = C, C + diff
        else:
            quad = max(QD[i] + QD[j] - 2.0 * Q[i, j], _TAU)
            delta = (G[i] - G[j]) / quad
            total = ai + aj
            ni, nj = ai - delta, aj + delta
            if total > C:
                if ni > C:
                    ni, nj = C, total - C
            elif nj < 0:
                nj, ni = 0.0, total
            if total > C:
                if nj > C:
                    nj, ni = C, total - C
            elif ni < 0:
                ni, nj = 0.0, total
        alpha[i], alpha[j] = ni, nj
        G += Q[:, i] * (ni - ai) + Q[:, j] * (nj - aj)

    if not converged:
        raise TrainingError(f"SMO did not converge within {max_iter} iterations", iteration=it)

    intercept = -_rho(alpha, d, G, C)
    sv = alpha > SV_TOL
    model = SvcModel(X[sv].copy(), alpha[sv] * d[sv], float(intercept), spec, C, it)
    return (model, alpha) if return_alpha else model


def _rho(alpha, d, G, C) -> float:
    yG = d * G
    free = (alpha > 0) & (alpha < C)
    if np.any(free):
        return float(yG[free].mean())
    at_upper = alpha >= C
    at_lower = ~at_upper
    ub_mask = (at_upper & (d < 0)) | (at_lower & (d > 0))
    lb_mask = (at_upper & (d > 0)) | (at_lower & (d < 0))
    ub = yG[ub_mask].min() if np.any(ub_mask) else np.inf
    lb = yG[lb_mask].max() if np.any(lb_mask) else -np.inf
    return float((ub + lb) / 2.0)


def svc_decision(model: SvcModel, x, include_intercept: bool = True):
    """sum_i alpha_i d_i k(x, x_i), plus the intercept when requested."""
    x = as_points(x, model.dim)
    X = np.atleast_2d(x)
    if model.dual_coef.size:
        values = gram(model.kernel, X, model.support_vectors) @ model.dual_coef
    else:
        values = np.zeros(X.shape[0])
    if include_intercept:
        values = values + model.intercept
    return float(values[0]) if x.ndim == 1 else values


def svc_predict(model: SvcModel, x):
    values = np.asarray(svc_decision(model, x, include_intercept=True))
    return np.where(values >= 0.0, 1, -1)


def dual_objective(alpha, X, d, spec: KernelSpec) -> float:
    """Q(alpha) = 1/2 a^T (dd^T * K) a - sum(a); smaller is better."""
    d = np.asarray(d, float)
    X = np.atleast_2d(np.asarray(X, float))
    spec = spec.resolved(X)
    Q = gram(spec, X, X) * np.outer(d, d)
    return float(0.5 * alpha @ Q @ alpha - alpha.sum())
