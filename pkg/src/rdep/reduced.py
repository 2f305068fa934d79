"""Supervised reduced orderings and the reduced dilation-erosion perceptron.

rho(x) = (rho_1(x), ..., rho_r(x)) stacks SVC decision functions (without
intercepts). The DEP is trained on the standardised transformed set
{(rho(x_i), sigma(d_i))}, and classification is
sigma^-1(sgn(tau(standardize(rho(x))))).
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .ccp import CcpConfig, TrainingSet, train_dep
from .errors import DimensionError, TrainingError
from .lattice import DepModel, as_points, dep_classify, dep_decision
from .preprocessing import ClassMap, Standardizer
from .svm import GAUSSIAN, LINEAR, POLY3, KernelSpec, SvcModel, svc_decision, train_svc

MAX_REDRAWS = 100


@dataclass(frozen=True)
class RhoMap:
    estimators: tuple[SvcModel, ...]
    construction: Literal["ensemble", "bagging"]

    def __post_init__(self):
        if len(self.estimators) == 0:
            raise ValueError("a reduced mapping needs at least one estimator")
        dims = {e.dim for e in self.estimators}
        if len(dims) != 1:
            raise DimensionError("estimators disagree on input dimension")
        object.__setattr__(self, "estimators", tuple(self.estimators))

    @property
    def dim(self) -> int:
        return self.estimators[0].dim

    @property
    def r(self) -> int:
        return len(self.estimators)


@dataclass(frozen=True)
class Ensemble:
    kernels: tuple[KernelSpec, ...] = (GAUSSIAN, LINEAR, POLY3)


@dataclass(frozen=True)
class Bagging:
    base: KernelSpec = GAUSSIAN
    n_estimators: int = 10
    seed: int = 0


def _train_many(jobs, n_jobs: int | None):
    if n_jobs and n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            return list(pool.map(lambda f: f(), jobs))
    return [f() for f in jobs]


def build_rho_ensemble(t: TrainingSet, kernels: Sequence[KernelSpec], box_C: float = 1.0,
                       n_jobs: int | None = None) -> RhoMap:
    """One SVC per kernel, each on the whole training set."""
    if len(kernels) == 0:
        raise ValueError("the ensemble needs at least one kernel")
    t.require_both_classes()
    jobs = [lambda k=k: train_svc(t.X, t.d, k, box_C) for k in kernels]
    return RhoMap(tuple(_train_many(jobs, n_jobs)), "ensemble")


def bootstrap_indices(m: int, d: np.ndarray, seed: int, index: int) -> np.ndarray:
    """Bootstrap resample for estimator ``index``; redraws single-class samples."""
    rng = np.random.default_rng([seed, index])
    for _ in range(MAX_REDRAWS):
        idx = rng.integers(0, m, size=m)
        if np.unique(d[idx]).size == 2:
            return idx
    raise TrainingError(f"bootstrap {index} kept drawing a single class")


def build_rho_bagging(t: TrainingSet, base: KernelSpec = GAUSSIAN, n_estimators: int = 10,
                      seed: int = 0, box_C: float = 1.0, n_jobs: int | None = None) -> RhoMap:
    if n_estimators < 1:
        raise ValueError("n_estimators must be at least 1")
    t.require_both_classes()
    m = t.X.shape[0]
    samples = [bootstrap_indices(m, t.d, seed, k) for k in range(n_estimators)]
    jobs = [lambda idx=idx: train_svc(t.X[idx], t.d[idx], base, box_C) for idx in samples]
    return RhoMap(tuple(_train_many(jobs, n_jobs)), "bagging")


def apply_rho(rho: RhoMap, x):
    x = as_points(x, rho.dim)
    X = np.atleast_2d(x)
    out = np.column_stack([svc_decision(e, X, include_intercept=False) for e in rho.estimators])
    return out[0] if x.ndim == 1 else out


@dataclass(frozen=True)
class RDepModel:
    rho: RhoMap
    rho_standardizer: Standardizer
    dep: DepModel
    class_map: ClassMap
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.dep.dim != self.rho.r:
            raise DimensionError("DEP dimension must equal the number of rho coordinates")

    @property
    def dim(self) -> int:
        return self.rho.dim

    def transform(self, x) -> np.ndarray:
        """standardize(rho(x))."""
        return self.rho_standardizer.transform(apply_rho(self.rho, x))


def train_rdep(X, labels, strategy: Ensemble | Bagging = Ensemble(), cfg: CcpConfig = CcpConfig(),
               box_C: float = 1.0, class_map: ClassMap | None = None,
               n_jobs: int | None = None) -> RDepModel:
    X = np.atleast_2d(as_points(X))
    class_map = class_map or ClassMap.from_labels(labels)
    d = class_map.to_signed(labels)
    if X.shape[0] != d.size:
        raise DimensionError("samples and labels differ in length")
    t = TrainingSet(X, d)
    t.require_both_classes()
    if isinstance(strategy, Ensemble):
        rho = build_rho_ensemble(t, strategy.kernels, box_C, n_jobs)
    elif isinstance(strategy, Bagging):
        rho = build_rho_bagging(t, strategy.base, strategy.n_estimators, strategy.seed, box_C, n_jobs)
    else:
        raise TypeError(f"unknown strategy {strategy!r}")
    Z = apply_rho(rho, X)
    scaler = Standardizer.fit(Z)
    dep = train_dep(TrainingSet(scaler.transform(Z), d), cfg)
    return RDepModel(rho, scaler, dep, class_map)


def rdep_decision(model: RDepModel, x):
    return dep_decision(model.dep, model.transform(x))


def rdep_classify(model: RDepModel, x):
    signs = dep_classify(model.dep, model.transform(x))
    out = model.class_map.from_signed(np.atleast_1d(signs))
    return out[0] if np.ndim(signs) == 0 else out


__all__ = [
    "Bagging", "Ensemble", "RDepModel", "RhoMap", "apply_rho", "bootstrap_indices",
    "build_rho_bagging", "build_rho_ensemble", "rdep_classify", "rdep_decision", "train_rdep",
]

