"""Reduced dilation-erosion perceptron classifiers and their evaluation harness."""
from .ccp import CcpConfig, TrainingSet, fit_beta, train_dep, train_morph_unit
from .errors import DataError, DimensionError, SolverError, TrainingError
from .lattice import DepModel, MorphUnit, dep_classify, dep_decision, dilate, erode, in_region
from .reduced import Bagging, Ensemble, RDepModel, apply_rho, rdep_classify, train_rdep
from .svm import GAUSSIAN, LINEAR, POLY3, KernelSpec, SvcModel, svc_decision, train_svc

__version__ = "0.1.0"

__all__ = [
    "Bagging", "CcpConfig", "DataError", "DepModel", "DimensionError", "Ensemble", "GAUSSIAN",
    "KernelSpec", "LINEAR", "MorphUnit", "POLY3", "RDepModel", "SolverError", "SvcModel",
    "TrainingError", "TrainingSet", "apply_rho", "dep_classify", "dep_decision", "dilate", "erode",
    "fit_beta", "in_region", "rdep_classify", "svc_decision", "train_dep", "train_morph_unit",
    "train_rdep", "train_svc",
]
