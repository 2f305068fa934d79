"""Command-line front end: ``rdep {train,predict,synth,benchmark}``.

Exit status is 0 on success, 1 on usage errors and 2 on data or training errors.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import serialize
from .data import (BUNDLED, EXTERNAL, Dataset, LoadError, dataset_path, impute_mean, load_bundled,
                   load_csv, make_moons, write_csv)
from .errors import DataError, DimensionError, SolverError, TrainingError
from .evaluation import ClassifierSpec, run_benchmark
from .models import KINDS, StandardizedClassifier, make_classifier
from .preprocessing import ClassMap

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2
BENCHMARK_SUBSET = ("banknote", "diabetes", "haberman", "sonar", "blood-transfusion")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _confidence(text: str) -> float:
    value = float(text)
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError("must lie strictly between 0 and 1")
    return value


def _common_model_flags(p: argparse.ArgumentParser):
    p.add_argument("--C", type=_positive_float, default=1e-2, help="CCP regularisation weight")
    p.add_argument("--box-C", dest="box_C", type=_positive_float, default=1.0, help="SVC box constraint")
    p.add_argument("--n-estimators", dest="n_estimators", type=_positive_int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=_positive_int, default=1, help="worker cap for internal parallelism")
    p.add_argument("--missing", default="?", help="token marking a missing cell")
    p.add_argument("--no-standardize", dest="standardize", action="store_false",
                   help="skip input standardisation")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rdep", description="Train, apply and benchmark dilation-erosion perceptron classifiers.")
    parser.add_argument("--config", help="key=value file supplying defaults; flags override it")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("train", help="fit a model on a CSV file and save it")
    p.add_argument("--model", choices=KINDS, default="rdep-ensemble")
    p.add_argument("--data", required=True)
    p.add_argument("--label", default="class", help="label column name")
    p.add_argument("--positive-class", dest="positive_class",
                   help="tag mapped to +1 (default: the later of the two tags in sorted order)")
    p.add_argument("--out", required=True)
    _common_model_flags(p)

    p = sub.add_parser("predict", help="emit one label per row of a CSV file")
    p.add_argument("--model", required=True, help="model file written by 'train'")
    p.add_argument("--data", required=True)
    p.add_argument("--label", help="column to ignore (defaults to the training label column)")
    p.add_argument("--missing", default="?")
    p.add_argument("--out", help="write labels here instead of stdout")

    p = sub.add_parser("synth", help="write a generated dataset")
    p.add_argument("--dataset", choices=("double-moon",), default="double-moon")
    p.add_argument("--n", type=_positive_int, default=1000)
    p.add_argument("--noise", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--label", default="y")
    p.add_argument("--invert", action="store_true", help="swap the two class tags")
    p.add_argument("--out", required=True)

    p = sub.add_parser("benchmark", help="stratified cross-validation of several classifiers")
    p.add_argument("--datasets", nargs="+", default=list(BENCHMARK_SUBSET),
                   help=f"bundled names ({', '.join(sorted({*BUNDLED, *EXTERNAL}))}) or CSV paths")
    p.add_argument("--models", nargs="+", choices=KINDS, default=list(KINDS))
    p.add_argument("--label", default="class")
    p.add_argument("--k", type=_positive_int, default=10)
    p.add_argument("--confidence", type=_confidence, default=0.99)
    p.add_argument("--skip-missing", action="store_true",
                   help="drop bundled datasets whose CSV is not available instead of failing")
    p.add_argument("--out-dir", dest="out_dir", help="write table.txt, scores.csv and hasse.dot here")
    _common_model_flags(p)
    return parser


def read_config(path) -> dict[str, str]:
    out = {}
    for n, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def parse_args(argv) -> argparse.Namespace:
    parser = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return parser.parse_args(argv)
    try:
        cfg = read_config(known.config)
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from exc
    # Config values act as defaults: they are inserted before the user's own flags.
    i = next((j for j, a in enumerate(argv) if a in COMMANDS), None)
    if i is None:
        return parser.parse_args(argv)
    sub = parser._subparsers._group_actions[0].choices[argv[i]]
    dests = {a.dest: a for a in sub._actions}
    injected = []
    for key, value in cfg.items():
        if key not in dests:
            raise UsageError(f"unknown config key {key!r} for '{argv[i]}'")
        action = dests[key]
        flag = action.option_strings[-1]
        if isinstance(action, argparse._StoreFalseAction):
            if value.lower() in ("0", "false", "no"):
                injected.append(flag)
        elif action.nargs in ("+", "*"):
            injected += [flag, *value.split()]
        else:
            injected += [flag, value]
    return parser.parse_args([*argv[: i + 1], *injected, *argv[i + 1:]])


def _load_training(args) -> Dataset:
    return impute_mean(load_csv(args.data, args.label, args.missing))


def cmd_train(args) -> int:
    ds = _load_training(args)
    classes = ds.classes
    if len(classes) != 2:
        raise DataError(f"expected two classes in {args.label!r}, found {classes}")
    class_map = ClassMap.from_labels(ds.labels)
    if args.positive_class is not None:
        tags = {str(c): c for c in classes}
        if args.positive_class not in tags:
            raise DataError(f"positive class {args.positive_class!r} not among {classes}")
        pos = tags[args.positive_class]
        class_map = ClassMap(next(c for c in classes if c != pos), pos)
    clf = make_classifier(args.model, C=args.C, box_C=args.box_C, n_estimators=args.n_estimators,
                          seed=args.seed, n_jobs=args.jobs)
    model = StandardizedClassifier(clf, args.standardize).fit(ds.features, ds.labels, class_map)
    serialize.save(model, args.out, args.model,
                   meta={"label_column": args.label, "feature_names": list(ds.feature_names)})
    acc = float(np.mean(model.predict(ds.features) == ds.labels))
    print(f"trained {args.model} on {ds.n_rows} rows; training accuracy {acc:.4f}; saved {args.out}")
    return EXIT_OK


def cmd_predict(args) -> int:
    model = serialize.load(args.model)
    meta = serialize.read_meta(args.model)
    label = args.label or meta.get("label_column")
    ds = load_csv(args.data, None, args.missing)
    if label and label in ds.feature_names:
        keep = [j for j, n in enumerate(ds.feature_names) if n != label]
        ds = Dataset(ds.features[:, keep], ds.labels, ds.name, tuple(ds.feature_names[j] for j in keep))
    if ds.n_features != model.dim:
        raise DimensionError(f"model expects {model.dim} features, {args.data} has {ds.n_features}")
    if ds.missing.any():
        raise DataError("prediction input contains missing cells")
    lines = "".join(f"{y}\n" for y in model.predict(ds.features))
    if args.out:
        Path(args.out).write_text(lines, encoding="utf-8")
    else:
        sys.stdout.write(lines)
    return EXIT_OK


def cmd_synth(args) -> int:
    if args.n < 2:
        raise DataError("--n must be at least 2")
    ds = make_moons(args.n, args.noise, args.seed)
    if args.invert:
        ds = ds.with_labels(1 - ds.labels.astype(int))
    write_csv(ds, args.out, args.label)
    print(f"wrote {ds.n_rows} rows to {args.out}")
    return EXIT_OK


def _benchmark_dataset(name: str, args) -> Dataset:
    if name in BUNDLED or name in EXTERNAL:
        return load_bundled(name)
    path = Path(name)
    return impute_mean(load_csv(path, args.label, args.missing, name=path.stem))


def cmd_benchmark(args) -> int:
    datasets = []
    for name in args.datasets:
        if args.skip_missing and name in EXTERNAL:
            try:
                dataset_path(name)
            except LoadError as exc:
                print(f"skipping {name}: {exc}", file=sys.stderr)
                continue
        datasets.append(_benchmark_dataset(name, args))
    if not datasets:
        raise DataError("no datasets to benchmark")
    params = {"C": args.C, "box_C": args.box_C, "n_estimators": args.n_estimators, "seed": args.seed}
    specs = [ClassifierSpec(m, m, params) for m in args.models]
    report = run_benchmark(datasets, specs, args.k, args.seed, args.confidence, args.jobs,
                           args.standardize)
    print(report.to_table())
    print(f"\n{len(datasets)} datasets, {args.k} folds, {report.seconds:.1f} s")
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "table.txt").write_text(report.to_table() + "\n", encoding="utf-8")
        (out / "scores.csv").write_text(report.to_csv(), encoding="utf-8")
        (out / "hasse.dot").write_text(report.to_dot(), encoding="utf-8")
    else:
        print()
        print(report.to_dot(), end="")
    return EXIT_OK


COMMANDS = {"train": cmd_train, "predict": cmd_predict, "synth": cmd_synth, "benchmark": cmd_benchmark}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
    except UsageError as exc:
        print(f"rdep: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (DataError, DimensionError, TrainingError, SolverError, serialize.FormatError) as exc:
        print(f"rdep: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"rdep: {exc}", file=sys.stderr)
        return EXIT_DATA
