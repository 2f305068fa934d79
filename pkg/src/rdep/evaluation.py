"""Cross-validation, balanced accuracy, paired t-tests and the benchmark harness."""
from __future__ import annotations

import csv
import io
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import networkx as nx
import numpy as np
from scipy import stats

from .data import Dataset, impute_mean
from .errors import DataError
from .models import StandardizedClassifier, make_classifier

log = logging.getLogger(__name__)


def stratified_kfold(labels, k: int, seed: int | None = 0) -> list[tuple[np.ndarray, np.ndarray]]:
    """Shuffled stratified folds as (train_idx, test_idx) pairs.

    Each class is dealt round-robin over the folds, starting where the
    previous class stopped, so per-fold class counts are within one of the
    proportional share and fold sizes are balanced.
    """
    if isinstance(labels, Dataset):
        labels = labels.labels
    y = np.asarray(labels, dtype=object)
    if int(k) != k or k < 2:
        raise ValueError("k must be an integer >= 2")
    rng = np.random.default_rng(seed)
    fold_of = np.empty(y.size, dtype=int)
    offset = 0
    for c in sorted(set(y.tolist())):
        members = np.flatnonzero(y == c)
        if members.size < k:
            raise DataError(f"class {c!r} has {members.size} members, fewer than k={k}")
        members = rng.permutation(members)
        fold_of[members] = (offset + np.arange(members.size)) % k
        offset += members.size
    idx = np.arange(y.size)
    return [(idx[fold_of != f], idx[fold_of == f]) for f in range(k)]


def balanced_accuracy(y_true, y_pred) -> float:
    """Mean of the per-class recalls for binary labels."""
    y_true = np.asarray(y_true, dtype=object)
    y_pred = np.asarray(y_pred, dtype=object)
    if y_true.shape != y_pred.shape:
        raise ValueError("y_true and y_pred differ in length")
    classes = sorted(set(y_true.tolist()))
    if len(classes) != 2:
        raise DataError(f"balanced accuracy needs both classes in y_true, found {len(classes)}")
    recalls = [np.mean(y_pred[y_true == c] == c) for c in classes]
    return float(np.mean(recalls))


@dataclass(frozen=True)
class TTestResult:
    a_beats_b: bool
    t_stat: float
    df: int
    critical: float


def paired_t_test(scores_a, scores_b, confidence: float = 0.99) -> TTestResult:
    """One-sided paired t-test of H1: mean(a - b) > 0."""
    a = np.asarray(scores_a, dtype=float)
    b = np.asarray(scores_b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("score vectors must be 1-D and of equal length")
    n = a.size
    if n < 2:
        raise ValueError("paired t-test needs at least two pairs")
    if not 0 < confidence < 1:
        raise ValueError("confidence must lie in (0, 1)")
    diff = a - b
    mean = float(diff.mean())
    sd = float(diff.std(ddof=1))
    crit = float(stats.t.ppf(confidence, n - 1))
    if sd == 0.0:
        t = 0.0 if mean == 0 else math.copysign(math.inf, mean)
        return TTestResult(mean > 0, t, n - 1, crit)
    t = mean / (sd / math.sqrt(n))
    return TTestResult(t > crit, t, n - 1, crit)


# --------------------------------------------------------------------------
# Benchmark harness


@dataclass(frozen=True)
class ClassifierSpec:
    """Named classifier recipe; ``params`` go to :func:`rdep.models.make_classifier`."""

    name: str
    kind: str
    params: dict = field(default_factory=dict)

    def build(self):
        return make_classifier(self.kind, **self.params)


def default_specs(C: float = 1e-2, box_C: float = 1.0, n_estimators: int = 10,
                  seed: int = 0) -> list[ClassifierSpec]:
    """The eight configurations compared in the benchmark, in table order."""
    from .models import KINDS
    params = {"C": C, "box_C": box_C, "n_estimators": n_estimators, "seed": seed}
    return [ClassifierSpec(k, k, params) for k in KINDS]


@dataclass
class CvReport:
    classifiers: list[str]
    datasets: list[str]
    k: int
    seed: int
    confidence: float
    scores: dict[tuple[str, str], np.ndarray]  # (classifier, dataset) -> per-fold scores
    wins: dict[tuple[str, str], TTestResult] = field(default_factory=dict)
    seconds: float = 0.0
    meta: dict = field(default_factory=dict)

    def mean(self, clf: str, ds: str) -> float:
        return float(self.scores[clf, ds].mean())

    def std(self, clf: str, ds: str) -> float:
        return float(self.scores[clf, ds].std())

    def dataset_means(self, clf: str) -> np.ndarray:
        return np.array([self.mean(clf, ds) for ds in self.datasets])

    def edges(self) -> list[tuple[str, str]]:
        return [(a, b) for a in self.classifiers for b in self.classifiers
                if a != b and (a, b) in self.wins and self.wins[a, b].a_beats_b]

    def to_table(self) -> str:
        """Aligned text table: one row per dataset, one column per classifier."""
        head = ["dataset", *self.classifiers]
        rows = [[ds, *(f"{self.mean(c, ds):.2f} ± {self.std(c, ds):.2f}" for c in self.classifiers)]
                for ds in self.datasets]
        if len(self.datasets) > 1:
            rows.append(["average", *(f"{self.dataset_means(c).mean():.2f}" for c in self.classifiers)])
        widths = [max(len(r[j]) for r in [head, *rows]) for j in range(len(head))]
        fmt = lambda r: "  ".join(cell.ljust(w) if j == 0 else cell.rjust(w)
                                  for j, (cell, w) in enumerate(zip(r, widths)))
        return "\n".join([fmt(head), fmt(["-" * w for w in widths]), *map(fmt, rows)])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["classifier", "dataset", "fold", "score"])
        for c in self.classifiers:
            for ds in self.datasets:
                for f, s in enumerate(self.scores[c, ds]):
                    w.writerow([c, ds, f, repr(float(s))])
        return buf.getvalue()

    def to_dot(self) -> str:
        return hasse_dot(self.classifiers, self.edges())


def hasse_dot(nodes: list[str], edges: list[tuple[str, str]], name: str = "outperforms") -> str:
    """DOT digraph of the transitive reduction of ``edges`` with nodes in the given order."""
    g = nx.DiGraph()
    g.add_nodes_from(nodes)
    g.add_edges_from(edges)
    note = ""
    if nx.is_directed_acyclic_graph(g):
        kept = set(nx.transitive_reduction(g).edges())
    else:
        kept, note = set(edges), "  // relation has a cycle; edges left unreduced\n"
    order = {n: i for i, n in enumerate(nodes)}
    lines = [f"digraph {name} {{\n", note]
    lines += [f'  "{n}";\n' for n in nodes]
    lines += [f'  "{a}" -> "{b}";\n' for a, b in sorted(kept, key=lambda e: (order[e[0]], order[e[1]]))]
    lines.append("}\n")
    return "".join(lines)


def _fold_task(args):
    spec, X, y, class_map, train_idx, test_idx, standardize = args
    model = StandardizedClassifier(spec.build(), standardize)
    model.fit(X[train_idx], y[train_idx], class_map)
    return balanced_accuracy(y[test_idx], model.predict(X[test_idx]))


def run_benchmark(datasets: list[Dataset], specs: list[ClassifierSpec] | None = None, k: int = 10,
                  seed: int = 0, confidence: float = 0.99, jobs: int | None = None,
                  standardize: bool = True) -> CvReport:
    """Stratified k-fold evaluation of every spec on identical splits.

    Pairwise one-sided t-tests compare per-dataset mean scores, so they
    need at least two datasets.
    """
    specs = list(specs) if specs is not None else default_specs(seed=seed)
    names = [s.name for s in specs]
    if len(set(names)) != len(names):
        raise ValueError("classifier names must be unique")
    ds_names = [d.name for d in datasets]
    if len(set(ds_names)) != len(ds_names):
        raise ValueError("dataset names must be unique")
    start = time.perf_counter()
    tasks, keys = [], []
    for ds in datasets:
        ds = impute_mean(ds)
        for f, (tr, te) in enumerate(stratified_kfold(ds.labels, k, seed)):
            for spec in specs:
                tasks.append((spec, ds.features, ds.labels, ds.class_map(), tr, te, standardize))
                keys.append((spec.name, ds.name, f))
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_fold_task, tasks, chunksize=1))
    else:
        results = []
        for key, task in zip(keys, tasks):
            results.append(_fold_task(task))
            log.info("%s on %s fold %d: %.4f", *key, results[-1])
    scores = {(c, d): np.zeros(k) for c in names for d in ds_names}
    for (c, d, f), s in zip(keys, results):
        scores[c, d][f] = s
    report = CvReport(names, ds_names, k, seed, confidence, scores,
                      meta={"t_test_samples": "per-dataset mean scores", "n_pairs": len(ds_names)})
    if len(ds_names) >= 2:
        for a in names:
            for b in names:
                if a != b:
                    report.wins[a, b] = paired_t_test(report.dataset_means(a),
                                                      report.dataset_means(b), confidence)
    report.seconds = time.perf_counter() - start
    return report
