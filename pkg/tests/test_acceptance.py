"""Acceptance criteria, one status line each (shown in the pytest terminal summary).

Criteria whose targets this implementation does not reach are kept as
strict expected failures so that the gap stays visible and is re-checked on
every run; the analysis behind each one lives in the decisions ledger.
"""
from __future__ import annotations

import time

import numpy as np
import pytest

from acceptance_log import record
from rdep import serialize
from rdep.ccp import TrainingSet, train_dep
from rdep.data import available, load_bundled, make_moons
from rdep.evaluation import default_specs, run_benchmark
from rdep.lattice import dep_classify
from rdep.models import KINDS, StandardizedClassifier, make_classifier
from rdep.reduced import Ensemble, rdep_classify, train_rdep
from rdep.svm import GAUSSIAN, LINEAR

MOON_SEED = 0


@pytest.fixture(scope="module")
def moons():
    train = make_moons(1000, 0.1, seed=MOON_SEED)
    test = make_moons(2000, 0.1, seed=MOON_SEED + 1)
    return train, test


def _signed(d):
    return np.where(d.labels.astype(int) == 1, 1, -1)


def _dep_on_moons(train, test, invert=False):
    s = -1 if invert else 1
    start = time.perf_counter()
    dep = train_dep(TrainingSet(train.features, s * _signed(train)))
    seconds = time.perf_counter() - start
    acc = float(np.mean(dep_classify(dep, test.features) == s * _signed(test)))
    return dep, acc, seconds


# --------------------------------------------------------------------------
# 1. double-moon DEP


def test_c1_double_moon_dep_accuracy_and_runtime(moons):
    dep, acc, seconds = _dep_on_moons(*moons)
    ok = 0.80 <= acc <= 0.86 and seconds < 180
    record("1a", ok, f"double-moon DEP test accuracy {acc:.3f} in [0.80, 0.86], {seconds:.1f} s < 180 s")
    assert ok


@pytest.mark.xfail(strict=True, reason="exact optimiser of the stated objective yields an interior beta; "
                                       "see ledger entry on the double-moon mixing weight")
def test_c1_double_moon_beta_is_one(moons):
    dep, _, _ = _dep_on_moons(*moons)
    ok = abs(dep.beta - 1.0) <= 0.05
    record("1b", ok, f"double-moon beta {dep.beta:.3f}, target 1 within 0.05")
    assert ok


# --------------------------------------------------------------------------
# 2. label inversion


def test_c2_label_inversion_contrast(moons):
    train, test = moons
    _, dep_acc, _ = _dep_on_moons(train, test, invert=True)
    flipped_train = 1 - train.labels.astype(int)
    flipped_test = 1 - test.labels.astype(int)
    accs = {}
    for kind in ("rdep-ensemble", "rdep-bagging"):
        clf = make_classifier(kind).fit(train.features, flipped_train)
        accs[kind] = float(np.mean(clf.predict(test.features) == flipped_test))
    ok = dep_acc <= 0.70 and min(accs.values()) >= 0.98
    record("2", ok, f"inverted labels: DEP {dep_acc:.3f} <= 0.70, ensemble r-DEP {accs['rdep-ensemble']:.3f} "
                    f"and bagging r-DEP {accs['rdep-bagging']:.3f} >= 0.98")
    assert ok


# --------------------------------------------------------------------------
# 3. Ripley


def test_c3_ripley(ripley):
    train, test = ripley
    d_tr = train.class_map().to_signed(train.labels)
    d_te = test.class_map().to_signed(test.labels)
    dep = train_dep(TrainingSet(train.features, d_tr))
    dep_acc = float(np.mean(dep_classify(dep, test.features) == d_te))
    m, w = dep.erosion_unit.weights, dep.dilation_unit.weights
    dm = np.abs(m - [0.53, -0.35]).max()
    dw = np.abs(w - [-0.57, -0.64]).max()
    model = train_rdep(train.features, train.labels, Ensemble((GAUSSIAN, LINEAR)))
    r_acc = float(np.mean(rdep_classify(model, test.features) == test.labels))
    ok = abs(dep_acc - 0.90) <= 0.03 and dm <= 0.15 and dw <= 0.15 and abs(r_acc - 0.91) <= 0.03
    record("3", ok, f"Ripley DEP accuracy {dep_acc:.3f}, m=({m[0]:.2f},{m[1]:.2f}) max dev {dm:.2f}, "
                    f"w=({w[0]:.2f},{w[1]:.2f}) max dev {dw:.2f}, ensemble r-DEP accuracy {r_acc:.3f}")
    assert ok


# --------------------------------------------------------------------------
# 4. benchmark subset

TABLE = {  # (ensemble r-DEP, bagging r-DEP) mean balanced accuracy
    "banknote": (1.00, 1.00),
    "diabetes": (0.74, 0.72),
    "haberman": (0.60, 0.58),
    "sonar": (0.85, 0.87),
    "blood-transfusion": (0.66, 0.55),
}
KNOWN_GAPS = {  # see the decisions ledger
    ("sonar", "rdep-bagging"): "mean 0.81 against 0.87",
    ("haberman", "rdep-ensemble"): "mean 0.65 against 0.60, above the band",
    ("haberman", "rdep-bagging"): "mean 0.63 against 0.58, above the band",
}
BUNDLED_SUBSET = [name for name in TABLE if available(name)]


@pytest.fixture(scope="module")
def benchmark():
    datasets = [load_bundled(name) for name in BUNDLED_SUBSET]
    return run_benchmark(datasets, default_specs(), k=10, seed=0)


def _c4_case(name, strategy):
    marks = []
    if not available(name):
        marks.append(pytest.mark.xfail(strict=True, reason=f"{name} CSV is not bundled and no copy was found"))
    elif (name, strategy) in KNOWN_GAPS:
        marks.append(pytest.mark.xfail(strict=True, reason=KNOWN_GAPS[name, strategy]))
    return pytest.param(name, strategy, marks=marks, id=f"{name}-{strategy}")


@pytest.mark.parametrize("name, strategy", [_c4_case(n, s) for n in TABLE
                                            for s in ("rdep-ensemble", "rdep-bagging")])
def test_c4_benchmark_subset(name, strategy, benchmark):
    target = TABLE[name][strategy == "rdep-bagging"]
    if name not in benchmark.datasets:
        record(f"4 {name}/{strategy}", False, f"dataset unavailable, target {target:.2f}")
        pytest.fail(f"{name} is unavailable")
    got = benchmark.mean(strategy, name)
    ok = abs(got - target) <= 0.05
    record(f"4 {name}/{strategy}", ok, f"mean balanced accuracy {got:.3f}, target {target:.2f} +- 0.05")
    assert ok


def test_c4_runtime_and_table(benchmark):
    print(benchmark.to_table())
    ok = benchmark.seconds < 30 * 60 and benchmark.classifiers == list(KINDS)
    record("4 runtime", ok, f"{len(benchmark.datasets)} bundled datasets, 8 classifiers, "
                            f"{benchmark.seconds:.0f} s < 1800 s")
    assert ok


# --------------------------------------------------------------------------
# 5. property suites (compact re-runs of the oracle checks in the unit tests)


def _lattice_check():
    from rdep.lattice import MorphUnit, dep_decision, DepModel, dilate, erode, join, meet
    rng = np.random.default_rng(1)
    for _ in range(1000):
        m, x, y = rng.normal(scale=5, size=(3, 4))
        e, d = MorphUnit("erosion", m), MorphUnit("dilation", m)
        lo, hi = meet(x, y), join(x, y)
        model = DepModel(e, d, float(rng.uniform()))
        if not (erode(e, lo) == min(erode(e, x), erode(e, y))
                and dilate(d, hi) == max(dilate(d, x), dilate(d, y))
                and dep_decision(model, lo) <= dep_decision(model, hi)):
            return False
    return True


def _ccp_check():
    from rdep.ccp import ccp_minimize
    rng = np.random.default_rng(2)
    for _ in range(20):
        X = rng.normal(size=(int(rng.integers(10, 40)), int(rng.integers(1, 4))))
        d = np.where(X.sum(1) + rng.normal(scale=0.7, size=len(X)) > 0, 1, -1)
        d[:2] = (-1, 1)
        for kind in ("erosion", "dilation"):
            if np.any(np.diff(ccp_minimize(kind, TrainingSet(X, d)).history) > 0):
                return False
    return True


def _lp_check():
    from oracles import random_bounded_lp, vertex_enumeration
    from rdep.lp import LinearProgram, solve_lp
    rng = np.random.default_rng(3)
    for _ in range(100):
        c, A, b, B = random_bounded_lp(rng)
        ref, sol = vertex_enumeration(c, A, b, B), solve_lp(LinearProgram(c, A, b, B), "simplex")
        if ref is None:
            if sol.status != "infeasible":
                return False
        elif sol.status != "optimal" or abs(sol.fun - ref) > 1e-7:
            return False
    return True


def _smo_check():
    from oracles import svm_dual_projected_gradient
    from rdep.svm import dual_objective, gram, train_svc
    rng = np.random.default_rng(4)
    done = 0
    while done < 20:
        X = rng.normal(size=(8, 2))
        d = np.where(X @ [1.0, 0.4] + rng.normal(scale=0.5, size=8) > 0, 1.0, -1.0)
        if len(set(d)) < 2:
            continue
        _, alpha = train_svc(X, d, GAUSSIAN, 1.0, return_alpha=True)
        Q = gram(GAUSSIAN.resolved(X), X, X) * np.outer(d, d)
        _, ref = svm_dual_projected_gradient(Q, d, 1.0, 5000)
        if abs(dual_objective(alpha, X, d, GAUSSIAN) - ref) > 1e-4 or abs(alpha @ d) > 1e-6:
            return False
        done += 1
    return True


def _beta_check():
    from oracles import beta_grid
    from rdep.ccp import fit_beta, hinge_loss
    from rdep.lattice import MorphUnit, dilate, erode
    rng = np.random.default_rng(5)
    for _ in range(50):
        X = rng.normal(size=(20, 2))
        d = np.where(rng.uniform(size=20) > 0.5, 1, -1)
        d[:2] = (-1, 1)
        m, w = MorphUnit("erosion", rng.normal(size=2)), MorphUnit("dilation", rng.normal(size=2))
        beta = fit_beta(m, w, TrainingSet(X, d))
        eps, dil = erode(m, X), dilate(w, X)
        if hinge_loss(beta, eps, dil, d.astype(float))[0] > beta_grid(eps, dil, d.astype(float))[1] + 1e-9:
            return False
    return True


def _composition_and_round_trip_check(moons):
    train, _ = moons
    rng = np.random.default_rng(6)
    X = rng.uniform(-2, 3, size=(400, 2))
    model = StandardizedClassifier(make_classifier("rdep-ensemble"), standardize=False)
    model.fit(train.features, train.labels)
    inner = model.classifier.model
    composed = dep_classify(inner.dep, inner.transform(X))
    if not np.array_equal(inner.class_map.to_signed(model.predict(X)), composed):
        return False
    return np.array_equal(serialize.loads(serialize.dumps(model)).predict(X), model.predict(X))


def _reproducibility_check(ripley):
    train, _ = ripley
    for kind in KINDS:
        docs = {serialize.dumps(StandardizedClassifier(make_classifier(kind, n_estimators=3, seed=9))
                                .fit(train.features, train.labels)) for _ in range(2)}
        if len(docs) != 1:
            return False
    return True


def test_c5_property_suites(moons, ripley):
    checks = {
        "lattice commutation and monotonicity (1000 triples)": _lattice_check(),
        "CCP monotone objective (20 datasets)": _ccp_check(),
        "LP vs vertex enumeration (100 LPs)": _lp_check(),
        "SMO vs projected gradient (20 sets)": _smo_check(),
        "fit_beta vs grid": _beta_check(),
        "composition identity and serialisation round trip": _composition_and_round_trip_check(moons),
        "fixed-seed reproducibility of every model kind": _reproducibility_check(ripley),
    }
    failed = [k for k, v in checks.items() if not v]
    record("5", not failed, "all property suites hold" if not failed else "failed: " + "; ".join(failed))
    assert not failed


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-rA"]))
