"""Max-plus / min-plus primitives on R^n with the component-wise order.

Every evaluation function accepts either a single point of shape ``(n,)``
(returning a float) or a batch of shape ``(k, n)`` (returning an array of
length ``k``).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DimensionError

Kind = Literal["erosion", "dilation"]


def as_points(x, n: int | None = None) -> np.ndarray:
    """Return ``x`` as a finite float array and check its trailing dimension."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim not in (1, 2) or arr.shape[-1] == 0:
        raise DimensionError(f"expected a vector or a 2-D batch, got shape {arr.shape}")
    if n is not None and arr.shape[-1] != n:
        raise DimensionError(f"dimension mismatch: expected {n}, got {arr.shape[-1]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("feature values must be finite")
    return arr


def _scalar_or_array(values: np.ndarray, x: np.ndarray):
    return float(values) if x.ndim == 1 else values


@dataclass(frozen=True)
class MorphUnit:
    kind: Kind
    weights: np.ndarray

    def __post_init__(self):
        if self.kind not in ("erosion", "dilation"):
            raise ValueError(f"unknown unit kind {self.kind!r}")
        w = np.array(self.weights, dtype=float).ravel()
        if w.size == 0 or not np.all(np.isfinite(w)):
            raise ValueError("weights must be a non-empty finite vector")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def dim(self) -> int:
        return self.weights.size

    def __call__(self, x):
        return erode(self, x) if self.kind == "erosion" else dilate(self, x)


def erode(unit: MorphUnit, x):
    """min_j (m_j + x_j)."""
    x = as_points(x, unit.dim)
    return _scalar_or_array(np.min(x + unit.weights, axis=-1), x)


def dilate(unit: MorphUnit, x):
    """max_j (w_j + x_j)."""
    x = as_points(x, unit.dim)
    return _scalar_or_array(np.max(x + unit.weights, axis=-1), x)


def sgn(values):
    """Hard limiter with sgn(0) = +1."""
    v = np.asarray(values, dtype=float)
    out = np.where(v >= 0.0, 1, -1)
    return int(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class DepModel:
    """Dilation-erosion perceptron: tau = beta*dilation + (1 - beta)*erosion."""

    erosion_unit: MorphUnit
    dilation_unit: MorphUnit
    beta: float

    def __post_init__(self):
        if self.erosion_unit.kind != "erosion" or self.dilation_unit.kind != "dilation":
            raise ValueError("DepModel needs one erosion unit and one dilation unit")
        if self.erosion_unit.dim != self.dilation_unit.dim:
            raise DimensionError("erosion and dilation units differ in dimension")
        beta = float(self.beta)
        if not 0.0 <= beta <= 1.0:
            raise ValueError(f"beta must lie in [0, 1], got {beta}")
        object.__setattr__(self, "beta", beta)

    @property
    def dim(self) -> int:
        return self.erosion_unit.dim


def dep_decision(model: DepModel, x):
    x = as_points(x, model.dim)
    d = np.max(x + model.dilation_unit.weights, axis=-1)
    e = np.min(x + model.erosion_unit.weights, axis=-1)
    return _scalar_or_array(model.beta * d + (1.0 - model.beta) * e, x)


def dep_classify(model: DepModel, x):
    return sgn(dep_decision(model, x))


def in_region(unit: MorphUnit, x):
    """Membership in E(m) = {x >= -m} for erosions, D(w) = {x < -w} for dilations."""
    x = as_points(x, unit.dim)
    if unit.kind == "erosion":
        inside = np.all(x >= -unit.weights, axis=-1)
    else:
        inside = np.all(x < -unit.weights, axis=-1)
    return bool(inside) if x.ndim == 1 else inside


def meet(x, y) -> np.ndarray:
    """Component-wise infimum."""
    return np.minimum(np.asarray(x, float), np.asarray(y, float))


def join(x, y) -> np.ndarray:
    """Component-wise supremum."""
    return np.maximum(np.asarray(x, float), np.asarray(y, float))


def leq(x, y) -> bool:
    """Component-wise order x <= y."""
    return bool(np.all(np.asarray(x, float) <= np.asarray(y, float)))
