"""Uniform fit/predict wrappers for every classifier the harness compares.

All wrappers take original class tags, map them through a ``ClassMap``
(sorted order: first tag -> -1) and predict original tags.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, ClassVar

import numpy as np

from .ccp import CcpConfig, TrainingSet, train_dep
from .lattice import DepModel, as_points, dep_classify
from .preprocessing import ClassMap, Standardizer
from .reduced import Bagging, Ensemble, RDepModel, bootstrap_indices, rdep_classify, train_rdep
from .svm import GAUSSIAN, LINEAR, POLY3, KernelSpec, SvcModel, svc_predict, train_svc


def _prepare(X, labels, class_map: ClassMap | None):
    X = np.atleast_2d(as_points(X))
    class_map = class_map or ClassMap.from_labels(labels)
    return X, class_map, class_map.to_signed(labels)


class Classifier:
    kind: ClassVar[str]

    def fit(self, X, labels, class_map: ClassMap | None = None) -> "Classifier":
        raise NotImplementedError

    def predict_signed(self, X) -> np.ndarray:
        raise NotImplementedError

    def predict(self, X) -> np.ndarray:
        return self.class_map.from_signed(self.predict_signed(X))

    @property
    def fitted(self) -> bool:
        return getattr(self, "class_map", None) is not None


@dataclass
class DepClassifier(Classifier):
    kind: ClassVar[str] = "dep"
    cfg: CcpConfig = field(default_factory=CcpConfig)
    model: DepModel | None = None
    class_map: ClassMap | None = None

    def fit(self, X, labels, class_map=None):
        X, self.class_map, d = _prepare(X, labels, class_map)
        self.model = train_dep(TrainingSet(X, d), self.cfg)
        return self

    def predict_signed(self, X):
        return np.atleast_1d(dep_classify(self.model, np.atleast_2d(X)))


@dataclass
class RDepClassifier(Classifier):
    kind: ClassVar[str] = "rdep"
    strategy: Ensemble | Bagging = field(default_factory=Ensemble)
    cfg: CcpConfig = field(default_factory=CcpConfig)
    box_C: float = 1.0
    n_jobs: int | None = None
    model: RDepModel | None = None
    class_map: ClassMap | None = None

    def fit(self, X, labels, class_map=None):
        X, self.class_map, _ = _prepare(X, labels, class_map)
        self.model = train_rdep(X, labels, self.strategy, self.cfg, self.box_C,
                                class_map=self.class_map, n_jobs=self.n_jobs)
        return self

    def predict(self, X):
        return np.atleast_1d(rdep_classify(self.model, np.atleast_2d(X)))

    def predict_signed(self, X):
        return self.class_map.to_signed(self.predict(X))


@dataclass
class SvcClassifier(Classifier):
    kind: ClassVar[str] = "svc"
    kernel: KernelSpec = GAUSSIAN
    box_C: float = 1.0
    model: SvcModel | None = None
    class_map: ClassMap | None = None

    def fit(self, X, labels, class_map=None):
        X, self.class_map, d = _prepare(X, labels, class_map)
        self.model = train_svc(X, d, self.kernel, self.box_C)
        return self

    def predict_signed(self, X):
        return svc_predict(self.model, np.atleast_2d(X))


def _majority(votes: np.ndarray) -> np.ndarray:
    """Row-wise sign of the vote sum; ties go to the negative class."""
    return np.where(votes.sum(axis=0) > 0, 1, -1)


@dataclass
class SvcVoteClassifier(Classifier):
    """Hard majority vote of SVCs with different kernels."""

    kind: ClassVar[str] = "svc-vote"
    kernels: tuple[KernelSpec, ...] = (GAUSSIAN, LINEAR, POLY3)
    box_C: float = 1.0
    models: tuple[SvcModel, ...] = ()
    class_map: ClassMap | None = None

    def fit(self, X, labels, class_map=None):
        X, self.class_map, d = _prepare(X, labels, class_map)
        self.models = tuple(train_svc(X, d, k, self.box_C) for k in self.kernels)
        return self

    def predict_signed(self, X):
        X = np.atleast_2d(X)
        return _majority(np.stack([svc_predict(m, X) for m in self.models]))


@dataclass
class SvcBaggingClassifier(Classifier):
    """Majority vote of SVCs trained on bootstrap resamples."""

    kind: ClassVar[str] = "svc-bag"
    base: KernelSpec = GAUSSIAN
    n_estimators: int = 10
    seed: int = 0
    box_C: float = 1.0
    models: tuple[SvcModel, ...] = ()
    class_map: ClassMap | None = None

    def fit(self, X, labels, class_map=None):
        X, self.class_map, d = _prepare(X, labels, class_map)
        m = X.shape[0]
        samples = [bootstrap_indices(m, d, self.seed, k) for k in range(self.n_estimators)]
        self.models = tuple(train_svc(X[i], d[i], self.base, self.box_C) for i in samples)
        return self

    predict_signed = SvcVoteClassifier.predict_signed


@dataclass
class StandardizedClassifier:
    """Input standardisation fitted on the training data, then a classifier."""

    classifier: Classifier
    standardize: bool = True
    scaler: Standardizer | None = None

    def fit(self, X, labels, class_map: ClassMap | None = None):
        X = np.atleast_2d(as_points(X))
        if self.standardize:
            self.scaler = Standardizer.fit(X)
            X = self.scaler.transform(X)
        self.classifier.fit(X, labels, class_map)
        return self

    def _input(self, X):
        X = np.atleast_2d(as_points(X))
        return self.scaler.transform(X) if self.scaler is not None else X

    def predict(self, X):
        return self.classifier.predict(self._input(X))

    @property
    def dim(self) -> int:
        c = self.classifier
        m = c.model if hasattr(c, "model") and c.model is not None else c.models[0]
        return m.dim


KINDS = ("dep", "rdep-ensemble", "rdep-bagging", "svc-linear", "svc-rbf", "svc-poly",
         "svc-vote", "svc-bag")


def make_classifier(kind: str, *, C: float = 1e-2, box_C: float = 1.0, n_estimators: int = 10,
                    seed: int = 0, n_jobs: int | None = None) -> Classifier:
    """Build an unfitted classifier by its harness name."""
    cfg = CcpConfig(regularization_C=C)
    factories: dict[str, Callable[[], Classifier]] = {
        "dep": lambda: DepClassifier(cfg),
        "rdep-ensemble": lambda: RDepClassifier(Ensemble(), cfg, box_C, n_jobs),
        "rdep-bagging": lambda: RDepClassifier(Bagging(GAUSSIAN, n_estimators, seed), cfg, box_C, n_jobs),
        "svc-linear": lambda: SvcClassifier(LINEAR, box_C),
        "svc-rbf": lambda: SvcClassifier(GAUSSIAN, box_C),
        "svc-poly": lambda: SvcClassifier(POLY3, box_C),
        "svc-vote": lambda: SvcVoteClassifier(box_C=box_C),
        "svc-bag": lambda: SvcBaggingClassifier(box_C=box_C, n_estimators=n_estimators, seed=seed),
    }
    if kind not in factories:
        raise ValueError(f"unknown model kind {kind!r}; choose from {', '.join(KINDS)}")
    return factories[kind]()
