import numpy as np
import pytest

import rdep.reduced as reduced
from rdep import serialize
from rdep.ccp import TrainingSet
from rdep.data import make_moons
from rdep.errors import DimensionError, TrainingError
from rdep.lattice import dep_classify, dep_decision, leq
from rdep.models import RDepClassifier
from rdep.reduced import (Bagging, Ensemble, RhoMap, apply_rho, bootstrap_indices, build_rho_bagging,
                          build_rho_ensemble, rdep_classify, rdep_decision, train_rdep)
from rdep.svm import GAUSSIAN, LINEAR, svc_decision

TWO = TrainingSet([[0.0, 0.0], [2.0, 0.0]], [-1, 1])


@pytest.fixture(scope="module")
def moons():
    return make_moons(1000, 0.1, seed=0), make_moons(2000, 0.1, seed=1)


@pytest.fixture(scope="module")
def moon_model(moons):
    train, _ = moons
    return train_rdep(train.features, train.labels, Ensemble((GAUSSIAN, LINEAR)))


def test_linear_rho_on_two_points():
    rho = build_rho_ensemble(TWO, [LINEAR])
    assert rho.r == 1 and rho.construction == "ensemble"
    assert apply_rho(rho, [2.0, 0.0]) == pytest.approx([2.0])


def test_empty_kernel_list():
    with pytest.raises(ValueError):
        build_rho_ensemble(TWO, [])
    with pytest.raises(ValueError):
        RhoMap((), "ensemble")


def test_apply_rho_order_purity_and_dimension(ripley):
    train, _ = ripley
    t = TrainingSet(train.features, train.class_map().to_signed(train.labels))
    rho = build_rho_ensemble(t, [GAUSSIAN, LINEAR])
    x = np.array([0.1, 0.4])
    z = apply_rho(rho, x)
    assert z.shape == (2,)
    assert z[0] == svc_decision(rho.estimators[0], x, include_intercept=False)
    assert z[1] == svc_decision(rho.estimators[1], x, include_intercept=False)
    assert apply_rho(rho, x).tobytes() == z.tobytes()
    assert apply_rho(rho, train.features).shape == (train.n_rows, 2)
    with pytest.raises(DimensionError):
        apply_rho(rho, [1.0, 2.0, 3.0])


def test_rho_maps_positives_high_on_separable_data(rng):
    X = np.vstack([rng.normal(size=(15, 3)) + 2.5, rng.normal(size=(15, 3)) - 2.5])
    d = np.r_[np.ones(15), -np.ones(15)]
    rho = build_rho_ensemble(TrainingSet(X, d), [LINEAR, GAUSSIAN], box_C=1e3)
    for est in rho.estimators:
        folded = svc_decision(est, X, include_intercept=False) + est.intercept
        assert np.array_equal(np.where(folded >= 0, 1, -1), d)


def test_bagging_shapes_and_determinism(ripley):
    train, _ = ripley
    t = TrainingSet(train.features, train.class_map().to_signed(train.labels))
    a = build_rho_bagging(t, GAUSSIAN, 10, seed=3)
    b = build_rho_bagging(t, GAUSSIAN, 10, seed=3)
    assert a.r == 10 and a.construction == "bagging"
    assert all(x.dual_coef.tobytes() == y.dual_coef.tobytes() for x, y in zip(a.estimators, b.estimators))
    c = build_rho_bagging(t, GAUSSIAN, 2, seed=3)
    # substreams depend on (seed, index) only, not on how many estimators are built
    assert c.estimators[1].dual_coef.tobytes() == a.estimators[1].dual_coef.tobytes()
    with pytest.raises(ValueError):
        build_rho_bagging(t, GAUSSIAN, 0)


def test_bagging_with_identity_bootstrap_equals_ensemble():
    X = np.array([[0.0, 0.3], [1.0, 1.2], [2.0, 0.1]])
    d = np.array([-1, 1, 1])
    seed = next(s for s in range(10_000) if np.array_equal(bootstrap_indices(3, d, s, 0), [0, 1, 2]))
    t = TrainingSet(X, d)
    bag = build_rho_bagging(t, GAUSSIAN, 1, seed=seed)
    ens = build_rho_ensemble(t, [GAUSSIAN])
    assert bag.estimators[0].dual_coef.tobytes() == ens.estimators[0].dual_coef.tobytes()
    assert np.array_equal(apply_rho(bag, X), apply_rho(ens, X))


def test_single_class_bootstraps_are_redrawn():
    d = np.r_[-1, np.ones(19, dtype=int)]
    seed = next(s for s in range(1000)
                if not np.any(np.random.default_rng([s, 0]).integers(0, 20, 20) == 0))
    idx = bootstrap_indices(20, d, seed, 0)
    assert set(d[idx]) == {-1, 1}


def test_persistent_single_class_resample_is_an_error(monkeypatch):
    monkeypatch.setattr(reduced, "MAX_REDRAWS", 0)
    with pytest.raises(TrainingError):
        bootstrap_indices(4, np.array([-1, 1, 1, 1]), 0, 0)


def test_ripley_ensemble_example(ripley):
    train, test = ripley
    model = train_rdep(train.features, train.labels, Ensemble((GAUSSIAN, LINEAR)))
    assert model.dep.erosion_unit.weights == pytest.approx([1.00, 0.57], abs=0.25)
    assert model.dep.dilation_unit.weights == pytest.approx([-0.59, -1.28], abs=0.25)
    assert model.dep.beta == pytest.approx(0.54, abs=0.25)
    acc = np.mean(rdep_classify(model, test.features) == test.labels)
    assert 0.89 <= acc <= 0.93


def test_double_moon_ensemble_accuracy(moons, moon_model):
    train, test = moons
    assert np.mean(rdep_classify(moon_model, train.features) == train.labels) >= 0.98
    acc = np.mean(rdep_classify(moon_model, test.features) == test.labels)
    assert acc >= 0.98
    swapped = train_rdep(train.features, 1 - train.labels.astype(int), Ensemble((GAUSSIAN, LINEAR)))
    acc_swapped = np.mean(rdep_classify(swapped, test.features) == 1 - test.labels.astype(int))
    assert abs(acc - acc_swapped) <= 0.02


def test_point_deep_in_positive_moon(moon_model):
    assert rdep_classify(moon_model, [0.0, 1.0]) == 1
    assert rdep_classify(moon_model, [1.0, -0.5]) == 0


def test_codomain_and_composition_identity(moon_model, rng):
    X = rng.uniform(-2, 3, size=(500, 2))
    labels = rdep_classify(moon_model, X)
    assert set(labels.tolist()) <= {0, 1}
    lhs = moon_model.class_map.to_signed(labels)
    rhs = dep_classify(moon_model.dep, moon_model.transform(X))
    assert np.array_equal(lhs, rhs)
    assert np.array_equal(rdep_decision(moon_model, X), dep_decision(moon_model.dep, moon_model.transform(X)))


def test_r_increasing(moon_model, rng):
    X, Y = rng.uniform(-2, 3, size=(2, 3000, 2))
    zx, zy = moon_model.transform(X), moon_model.transform(Y)
    comparable = np.all(zx <= zy, axis=1)
    assert comparable.sum() > 100
    tx, ty = rdep_decision(moon_model, X[comparable]), rdep_decision(moon_model, Y[comparable])
    assert np.all(tx <= ty)
    sx = moon_model.class_map.to_signed(rdep_classify(moon_model, X[comparable]))
    sy = moon_model.class_map.to_signed(rdep_classify(moon_model, Y[comparable]))
    assert np.all(sx <= sy)
    assert leq(zx[comparable][0], zy[comparable][0])


def test_transformed_training_set_is_standardised(moons, moon_model):
    train, _ = moons
    Z = moon_model.transform(train.features)
    assert np.abs(Z.mean(axis=0)).max() < 1e-10
    assert Z.std(axis=0) == pytest.approx([1.0, 1.0])


def test_fixed_seed_gives_identical_bytes(ripley):
    train, _ = ripley
    docs = [serialize.dumps(RDepClassifier(Bagging(GAUSSIAN, 4, seed=11)).fit(train.features, train.labels))
            for _ in range(2)]
    assert docs[0] == docs[1]


def test_unknown_strategy(ripley):
    train, _ = ripley
    with pytest.raises(TypeError):
        train_rdep(train.features, train.labels, strategy="ensemble")


def test_parallel_estimator_training_matches_serial(ripley):
    train, _ = ripley
    a = train_rdep(train.features, train.labels, Bagging(GAUSSIAN, 4, 5))
    b = train_rdep(train.features, train.labels, Bagging(GAUSSIAN, 4, 5), n_jobs=4)
    assert np.array_equal(rdep_decision(a, train.features), rdep_decision(b, train.features))
