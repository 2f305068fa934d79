"""Dataset container, CSV ingestion, imputation, synthetic moons and bundled fixtures."""
from __future__ import annotations

import csv
import os
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import DataError
from .preprocessing import ClassMap


class LoadError(DataError):
    """Base class for CSV ingestion failures."""


class UnreadableFileError(LoadError):
    pass


class NonNumericCellError(LoadError):
    pass


class UnknownLabelColumnError(LoadError):
    pass


@dataclass(frozen=True)
class Dataset:
    """Feature matrix (NaN marks a missing cell), per-row class tags and a name."""

    features: np.ndarray
    labels: np.ndarray
    name: str = ""
    feature_names: tuple[str, ...] = ()
    class_order: tuple | None = None  # (negative, positive); sorted tags when None

    def __post_init__(self):
        X = np.atleast_2d(np.asarray(self.features, dtype=float))
        y = np.asarray(self.labels, dtype=object).ravel()
        if X.shape[0] != y.size:
            raise DataError(f"{X.shape[0]} feature rows but {y.size} labels")
        if np.any(np.isinf(X)):
            raise DataError("features must be finite or missing")
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "labels", y)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def missing(self) -> np.ndarray:
        return np.isnan(self.features)

    @property
    def classes(self) -> list:
        return sorted(set(self.labels.tolist()))

    def class_map(self) -> ClassMap:
        if self.class_order is not None:
            return ClassMap(*self.class_order)
        return ClassMap.from_labels(self.labels)

    def subset(self, idx) -> "Dataset":
        return replace(self, features=self.features[idx], labels=self.labels[idx])

    def with_labels(self, labels, class_order: tuple | None = None) -> "Dataset":
        return replace(self, labels=np.asarray(labels, dtype=object), class_order=class_order)


def _label_value(raw: str):
    """Keep tags verbatim, but give integer-looking tags an int type so they sort numerically."""
    try:
        return int(raw)
    except ValueError:
        return raw


def load_csv(path, label_column: str | None = "class", missing_token: str | None = "?",
             name: str | None = None) -> Dataset:
    """Read a headed CSV. ``label_column=None`` reads an unlabeled file."""
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except (OSError, UnicodeDecodeError) as exc:
        raise UnreadableFileError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise UnreadableFileError(f"{path} has no header row")
    header = [h.strip() for h in rows[0]]
    body = [r for r in rows[1:] if any(cell.strip() for cell in r)]
    if label_column is None:
        label_idx = None
    elif label_column in header:
        label_idx = header.index(label_column)
    else:
        raise UnknownLabelColumnError(f"label column {label_column!r} not in header {header}")
    feat_idx = [j for j in range(len(header)) if j != label_idx]

    X = np.empty((len(body), len(feat_idx)))
    labels = []
    for i, row in enumerate(body):
        if len(row) != len(header):
            raise LoadError(f"{path}:{i + 2}: expected {len(header)} cells, found {len(row)}")
        for col, j in enumerate(feat_idx):
            cell = row[j].strip()
            if missing_token is not None and cell == missing_token:
                X[i, col] = np.nan
                continue
            try:
                X[i, col] = float(cell)
            except ValueError:
                raise NonNumericCellError(
                    f"{path}:{i + 2}: non-numeric value {cell!r} in column {header[j]!r}") from None
            if not np.isfinite(X[i, col]):
                raise NonNumericCellError(f"{path}:{i + 2}: non-finite value in {header[j]!r}")
        if label_idx is not None:
            labels.append(_label_value(row[label_idx].strip()))
    if label_idx is None:
        labels = [None] * len(body)
    return Dataset(X, np.array(labels, dtype=object), name or path.stem,
                   tuple(header[j] for j in feat_idx))


def write_csv(dataset: Dataset, path, label_column: str = "class") -> None:
    names = dataset.feature_names or tuple(f"x{j + 1}" for j in range(dataset.n_features))
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([*names, label_column])
        for x, y in zip(dataset.features, dataset.labels):
            writer.writerow([*(repr(float(v)) for v in x), y])


def impute_mean(d: Dataset) -> Dataset:
    missing = d.missing
    if not missing.any():
        return d
    counts = (~missing).sum(axis=0)
    if np.any(counts == 0):
        bad = [d.feature_names[j] if d.feature_names else str(j) for j in np.flatnonzero(counts == 0)]
        raise DataError(f"cannot impute all-missing columns: {bad}")
    means = np.nanmean(d.features, axis=0)
    X = np.where(missing, means[None, :], d.features)
    return replace(d, features=X)


def make_moons(n: int, noise_sigma: float = 0.1, seed: int | None = 0) -> Dataset:
    """Two interleaving unit half-circles.

    The upper moon holds ceil(n/2) points with label 1; the lower moon,
    reflected and shifted by (1, -0.5), holds floor(n/2) points with label 0.
    Rows are shuffled and Gaussian noise is added per coordinate.
    """
    if int(n) != n or n < 2:
        raise DataError("make_moons needs n >= 2")
    if noise_sigma < 0:
        raise DataError("noise_sigma must be non-negative")
    n = int(n)
    n_up, n_low = (n + 1) // 2, n // 2
    rng = np.random.default_rng(seed)
    t_up = np.linspace(0.0, np.pi, n_up)
    t_low = np.linspace(0.0, np.pi, n_low)
    upper = np.column_stack([np.cos(t_up), np.sin(t_up)])
    lower = np.column_stack([1.0 - np.cos(t_low), 0.5 - np.sin(t_low)])
    X = np.vstack([upper, lower])
    y = np.concatenate([np.ones(n_up, dtype=int), np.zeros(n_low, dtype=int)])
    order = rng.permutation(n)
    X, y = X[order], y[order]
    if noise_sigma > 0:
        X = X + rng.normal(scale=noise_sigma, size=X.shape)
    return Dataset(X, y.astype(object), "double-moon", ("x1", "x2"))


# --------------------------------------------------------------------------
# Bundled fixtures

BUNDLED = {
    "ripley-train": "ripley_train.csv",
    "ripley-test": "ripley_test.csv",
    "sonar": "sonar.csv",
    "diabetes": "diabetes.csv",
    "haberman": "haberman.csv",
}
# (negative, positive) following the nominal order declared by the original
# repository files; the DEP is not invariant to this choice.
CLASS_ORDER = {
    "ripley-train": (0, 1),
    "ripley-test": (0, 1),
    "sonar": ("R", "M"),
    "diabetes": ("tested_negative", "tested_positive"),
    "haberman": ("negative", "positive"),
}
# Datasets used by the benchmark subset that are looked up outside the package.
EXTERNAL = {"banknote": "banknote.csv", "blood-transfusion": "blood-transfusion.csv"}
DATA_DIR_ENV = "RDEP_DATA_DIR"


def data_dir() -> Path | None:
    env = os.environ.get(DATA_DIR_ENV)
    return Path(env) if env else None


def dataset_path(name: str) -> Path:
    if name in BUNDLED:
        return Path(str(resources.files("rdep") / "data" / BUNDLED[name]))
    if name in EXTERNAL:
        root = data_dir()
        candidates = [root / EXTERNAL[name]] if root else []
        candidates.append(Path(str(resources.files("rdep") / "data" / EXTERNAL[name])))
        for p in candidates:
            if p.is_file():
                return p
        raise UnreadableFileError(
            f"dataset {name!r} is not bundled; place {EXTERNAL[name]} (header row, label column "
            f"'class') in the directory named by ${DATA_DIR_ENV}")
    raise DataError(f"unknown dataset {name!r}; known: {sorted({*BUNDLED, *EXTERNAL})}")


def load_bundled(name: str) -> Dataset:
    d = impute_mean(load_csv(dataset_path(name), "class", "?", name=name))
    return replace(d, class_order=CLASS_ORDER.get(name))


def available(name: str) -> bool:
    try:
        dataset_path(name)
    except DataError:
        return False
    return True
