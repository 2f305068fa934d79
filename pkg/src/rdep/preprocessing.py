"""Feature standardisation and label encoding."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError, DimensionError

STD_EPS = 1e-12


@dataclass(frozen=True)
class Standardizer:
    """Per-column centring and scaling with population std (ddof=0).

    Columns whose std falls below ``STD_EPS`` keep a scale of 1.
    """

    mean: np.ndarray
    std: np.ndarray

    @classmethod
    def fit(cls, X) -> "Standardizer":
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[0] == 0:
            raise DataError("cannot fit a standardizer on an empty dataset")
        std = X.std(axis=0)
        std = np.where(std < STD_EPS, 1.0, std)
        return cls(X.mean(axis=0), std)

    def transform(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.shape[-1] != self.mean.size:
            raise DimensionError(f"expected {self.mean.size} columns, got {X.shape[-1]}")
        return (X - self.mean) / self.std


def fit_standardizer(X) -> Standardizer:
    return Standardizer.fit(X)


def apply_standardizer(s: Standardizer, X) -> np.ndarray:
    return s.transform(X)


@dataclass(frozen=True)
class ClassMap:
    """Bijection between two original class tags and {-1, +1}."""

    negative_class: object
    positive_class: object

    def __post_init__(self):
        if self.negative_class == self.positive_class:
            raise DataError("the two classes must differ")

    @classmethod
    def from_labels(cls, labels) -> "ClassMap":
        """First class in sorted order becomes -1."""
        classes = sorted(set(np.asarray(labels).tolist()))
        if len(classes) != 2:
            raise DataError(f"expected exactly two classes, found {len(classes)}")
        return cls(classes[0], classes[1])

    def to_signed(self, labels) -> np.ndarray:
        labels = np.asarray(labels, dtype=object)
        pos = labels == self.positive_class
        neg = labels == self.negative_class
        if not np.all(pos | neg):
            raise DataError("labels outside the class map")
        return np.where(pos, 1, -1)

    def from_signed(self, signs) -> np.ndarray:
        signs = np.asarray(signs)
        out = np.empty(signs.shape, dtype=object)
        out[signs > 0] = self.positive_class
        out[signs <= 0] = self.negative_class
        return out

    def swapped(self) -> "ClassMap":
        return ClassMap(self.positive_class, self.negative_class)
