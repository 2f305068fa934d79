"""DEP and r-DEP on Ripley's synthetic data (raw inputs)."""
import numpy as np

from rdep.ccp import TrainingSet, train_dep
from rdep.data import load_bundled
from rdep.lattice import dep_classify
from rdep.reduced import Bagging, Ensemble, rdep_classify, train_rdep
from rdep.svm import GAUSSIAN, LINEAR


def main():
    train, test = load_bundled("ripley-train"), load_bundled("ripley-test")
    cm = train.class_map()
    d_tr, d_te = cm.to_signed(train.labels), cm.to_signed(test.labels)
    dep = train_dep(TrainingSet(train.features, d_tr))
    print(f"DEP  m={np.round(dep.erosion_unit.weights, 3)} w={np.round(dep.dilation_unit.weights, 3)} "
          f"beta={dep.beta:.3f}")
    print(f"     train {np.mean(dep_classify(dep, train.features) == d_tr):.3f} "
          f"test {np.mean(dep_classify(dep, test.features) == d_te):.3f}")
    for label, strategy in [("ensemble(g,l)", Ensemble((GAUSSIAN, LINEAR))), ("bagging(2)", Bagging(GAUSSIAN, 2))]:
        model = train_rdep(train.features, train.labels, strategy)
        acc_tr = np.mean(rdep_classify(model, train.features) == train.labels)
        acc_te = np.mean(rdep_classify(model, test.features) == test.labels)
        print(f"r-DEP {label}: beta={model.dep.beta:.3f} train {acc_tr:.3f} test {acc_te:.3f}")


if __name__ == "__main__":
    main()
