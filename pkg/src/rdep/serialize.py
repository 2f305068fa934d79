"""Versioned JSON documents for fitted models.

Floats are written with ``repr`` precision by the json module, so a
save/load cycle reproduces every weight bit for bit.
"""
from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .ccp import CcpConfig
from .lattice import DepModel, MorphUnit
from .models import (DepClassifier, RDepClassifier, StandardizedClassifier, SvcBaggingClassifier,
                     SvcClassifier, SvcVoteClassifier)
from .preprocessing import ClassMap, Standardizer
from .reduced import Bagging, Ensemble, RDepModel, RhoMap
from .svm import KernelSpec, SvcModel

FORMAT = "rdep-model"
FORMAT_VERSION = 1


class FormatError(ValueError):
    pass


def _py(value):
    """numpy scalars to plain Python for json."""
    return value.item() if isinstance(value, np.generic) else value


def _arr(a) -> list:
    return np.asarray(a, dtype=float).tolist()


def kernel_state(k: KernelSpec) -> dict:
    return asdict(k)


def kernel_from(s: dict) -> KernelSpec:
    return KernelSpec(**s)


def svc_state(m: SvcModel) -> dict:
    return {
        "kernel": kernel_state(m.kernel),
        "support_vectors": _arr(m.support_vectors),
        "dual_coef": _arr(m.dual_coef),
        "intercept": float(m.intercept),
        "box_C": float(m.box_C),
        "n_iter": int(m.n_iter),
    }


def svc_from(s: dict) -> SvcModel:
    sv = np.asarray(s["support_vectors"], dtype=float)
    return SvcModel(sv.reshape(len(s["dual_coef"]), -1) if sv.size == 0 else sv,
                    np.asarray(s["dual_coef"], dtype=float), float(s["intercept"]),
                    kernel_from(s["kernel"]), float(s["box_C"]), int(s.get("n_iter", 0)))


def dep_state(m: DepModel) -> dict:
    return {"m": _arr(m.erosion_unit.weights), "w": _arr(m.dilation_unit.weights), "beta": float(m.beta)}


def dep_from(s: dict) -> DepModel:
    return DepModel(MorphUnit("erosion", np.asarray(s["m"], float)),
                    MorphUnit("dilation", np.asarray(s["w"], float)), float(s["beta"]))


def scaler_state(s: Standardizer | None):
    return None if s is None else {"mean": _arr(s.mean), "std": _arr(s.std)}


def scaler_from(s):
    return None if s is None else Standardizer(np.asarray(s["mean"], float), np.asarray(s["std"], float))


def class_map_state(c: ClassMap) -> dict:
    return {"negative_class": _py(c.negative_class), "positive_class": _py(c.positive_class)}


def class_map_from(s: dict) -> ClassMap:
    return ClassMap(s["negative_class"], s["positive_class"])


def rdep_state(m: RDepModel) -> dict:
    return {
        "construction": m.rho.construction,
        "estimators": [svc_state(e) for e in m.rho.estimators],
        "rho_standardizer": scaler_state(m.rho_standardizer),
        "dep": dep_state(m.dep),
    }


def rdep_from(s: dict, class_map: ClassMap) -> RDepModel:
    rho = RhoMap(tuple(svc_from(e) for e in s["estimators"]), s["construction"])
    return RDepModel(rho, scaler_from(s["rho_standardizer"]), dep_from(s["dep"]), class_map)


def _classifier_state(c) -> dict:
    out = {"type": c.kind, "class_map": class_map_state(c.class_map)}
    if isinstance(c, DepClassifier):
        out.update(config=asdict(c.cfg), dep=dep_state(c.model))
    elif isinstance(c, RDepClassifier):
        st = c.strategy
        strategy = ({"name": "ensemble", "kernels": [kernel_state(k) for k in st.kernels]}
                    if isinstance(st, Ensemble) else
                    {"name": "bagging", "base": kernel_state(st.base),
                     "n_estimators": st.n_estimators, "seed": st.seed})
        out.update(config=asdict(c.cfg), box_C=c.box_C, strategy=strategy, rdep=rdep_state(c.model))
    elif isinstance(c, SvcClassifier):
        out.update(kernel=kernel_state(c.kernel), box_C=c.box_C, svc=svc_state(c.model))
    elif isinstance(c, SvcVoteClassifier):
        out.update(kernels=[kernel_state(k) for k in c.kernels], box_C=c.box_C,
                   estimators=[svc_state(m) for m in c.models])
    elif isinstance(c, SvcBaggingClassifier):
        out.update(base=kernel_state(c.base), n_estimators=c.n_estimators, seed=c.seed,
                   box_C=c.box_C, estimators=[svc_state(m) for m in c.models])
    else:
        raise TypeError(f"cannot serialise {type(c).__name__}")
    return out


def _classifier_from(s: dict):
    cmap = class_map_from(s["class_map"])
    kind = s["type"]
    if kind == "dep":
        return DepClassifier(CcpConfig(**s["config"]), dep_from(s["dep"]), cmap)
    if kind == "rdep":
        st = s["strategy"]
        strategy = (Ensemble(tuple(kernel_from(k) for k in st["kernels"])) if st["name"] == "ensemble"
                    else Bagging(kernel_from(st["base"]), st["n_estimators"], st["seed"]))
        return RDepClassifier(strategy, CcpConfig(**s["config"]), s["box_C"], None,
                              rdep_from(s["rdep"], cmap), cmap)
    if kind == "svc":
        return SvcClassifier(kernel_from(s["kernel"]), s["box_C"], svc_from(s["svc"]), cmap)
    if kind == "svc-vote":
        return SvcVoteClassifier(tuple(kernel_from(k) for k in s["kernels"]), s["box_C"],
                                 tuple(svc_from(e) for e in s["estimators"]), cmap)
    if kind == "svc-bag":
        return SvcBaggingClassifier(kernel_from(s["base"]), s["n_estimators"], s["seed"], s["box_C"],
                                    tuple(svc_from(e) for e in s["estimators"]), cmap)
    raise FormatError(f"unknown classifier type {kind!r}")


def to_document(model, name: str | None = None, meta: dict | None = None) -> dict:
    """Self-describing dict for a fitted classifier (optionally wrapped with input scaling)."""
    if isinstance(model, StandardizedClassifier):
        scaler, clf = model.scaler, model.classifier
    else:
        scaler, clf = None, model
    if not clf.fitted:
        raise ValueError("model is not fitted")
    return {
        "format": FORMAT,
        "format_version": FORMAT_VERSION,
        "name": name or clf.kind,
        "meta": dict(meta or {}),
        "input_standardizer": scaler_state(scaler),
        "classifier": _classifier_state(clf),
    }


def from_document(doc: dict) -> StandardizedClassifier:
    if doc.get("format") != FORMAT:
        raise FormatError("not an rdep model document")
    if doc.get("format_version") != FORMAT_VERSION:
        raise FormatError(f"unsupported format version {doc.get('format_version')!r}")
    scaler = scaler_from(doc["input_standardizer"])
    try:
        clf = _classifier_from(doc["classifier"])
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed model document: {exc}") from exc
    return StandardizedClassifier(clf, scaler is not None, scaler)


def dumps(model, name: str | None = None, meta: dict | None = None) -> str:
    return json.dumps(to_document(model, name, meta), indent=1)


def loads(text: str) -> StandardizedClassifier:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"model file is not valid JSON: {exc}") from exc
    return from_document(doc)


def save(model, path, name: str | None = None, meta: dict | None = None) -> None:
    Path(path).write_text(dumps(model, name, meta), encoding="utf-8")


def read_meta(path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8")).get("meta", {})


def load(path) -> StandardizedClassifier:
    return loads(Path(path).read_text(encoding="utf-8"))
