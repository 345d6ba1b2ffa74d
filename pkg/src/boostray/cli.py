"""Command-line harness: train, predict, cv, holdout, and inspect.

Configuration precedence is flags > config file > defaults; the config
file is a flat ``key=value`` text file keyed by long flag names.  Exit
codes: 0 ok, 1 internal failure, 2 input/data problem, 3 configuration
problem.  Every failure prints a single ``error:`` line.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .boosting import HyperParams, _train, load_model, predict_proba, save_model
from .data import DEFAULT_SEED, Dataset, load_csv, load_fmx
from .errors import BoostrayError, ConfigError, FormatError
from .metrics import CvResult, MetricsReport, run_cv, run_holdout
from .objectives import BINARY_LOGISTIC, SOFTMAX, ObjectiveSpec
from .tree import LEAF

REPORT_FORMATS = ("text", "csv", "json")

_DEFAULTS = {
    "seed": DEFAULT_SEED,
    "threads": 0,  # 0 = all available cores
    "report_format": "text",
    "rounds": 100,
    "eta": 0.44,
    "gamma": 0.0,
    "lambda": 1.0,
    "max_depth": 6,
    "min_child_weight": 1.0,
    "folds": 5,
    "test_fraction": 0.2,
}


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems on the config exit code."""

    def error(self, message):
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(3)


def build_parser() -> _Parser:
    parser = _Parser(prog="boostray", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_shared(p: _Parser, needs_data=False, needs_model=False):
        p.add_argument("--data", help="feature file (.fmx or .csv)" +
                       (" [required]" if needs_data else ""))
        p.add_argument("--model", help="model file to read" +
                       (" [required]" if needs_model else ""))
        p.add_argument("--out", help="output path (default: stdout for reports)")
        p.add_argument("--report-format", choices=REPORT_FORMATS, default=None,
                       help=f"report format (default {_DEFAULTS['report_format']})")
        p.add_argument("--seed", type=int, default=None,
                       help=f"split/shuffle seed (default {_DEFAULTS['seed']})")
        p.add_argument("--threads", type=int, default=None,
                       help="split-search worker threads; 0 = all cores "
                            "(default 0, env BOOSTRAY_THREADS)")
        p.add_argument("--config", help="flat key=value config file")
        p.add_argument("--rounds", type=int, default=None,
                       help=f"boosting rounds (default {_DEFAULTS['rounds']})")
        p.add_argument("--eta", type=float, default=None,
                       help=f"learning rate in (0, 1] (default {_DEFAULTS['eta']})")
        p.add_argument("--gamma", type=float, default=None,
                       help=f"per-leaf complexity cost (default {_DEFAULTS['gamma']})")
        p.add_argument("--lambda", dest="lambda_", type=float, default=None,
                       help=f"L2 weight regularization (default {_DEFAULTS['lambda']})")
        p.add_argument("--max-depth", type=int, default=None,
                       help=f"tree depth limit (default {_DEFAULTS['max_depth']})")
        p.add_argument("--min-child-weight", type=float, default=None,
                       help="minimum hessian sum per child "
                            f"(default {_DEFAULTS['min_child_weight']})")

    p_train = sub.add_parser("train", help="train a model and write it to --out")
    add_shared(p_train, needs_data=True)

    p_predict = sub.add_parser("predict", help="emit per-row class probabilities")
    add_shared(p_predict, needs_data=True, needs_model=True)

    p_cv = sub.add_parser("cv", help="stratified k-fold cross-validation report")
    add_shared(p_cv, needs_data=True)
    p_cv.add_argument("--folds", type=int, default=None,
                      help=f"number of folds, k >= 2 (default {_DEFAULTS['folds']})")

    p_holdout = sub.add_parser("holdout", help="stratified holdout report")
    add_shared(p_holdout, needs_data=True)
    p_holdout.add_argument("--test-fraction", type=float, default=None,
                           help="test share in (0, 1) "
                                f"(default {_DEFAULTS['test_fraction']})")

    p_inspect = sub.add_parser("inspect", help="summarize a model file")
    add_shared(p_inspect, needs_model=True)
    return parser


# ---------------------------------------------------------------------------
# configuration resolution
# ---------------------------------------------------------------------------

def _read_config_file(path: str) -> dict[str, str]:
    p = Path(path)
    if not p.exists():
        raise FormatError(f"config file not found: {path}")
    values: dict[str, str] = {}
    for line_no, line in enumerate(p.read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}: line {line_no} is not key=value")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def _coerce(key: str, raw: str):
    kind = type(_DEFAULTS.get(key, ""))
    try:
        if kind is int:
            return int(raw)
        if kind is float:
            return float(raw)
        return raw
    except ValueError:
        raise ConfigError(f"config value for {key!r} is not a {kind.__name__}: {raw!r}")


def _resolve(args: argparse.Namespace) -> dict:
    """Merge flag / config-file / default values into one settings dict."""
    file_values: dict[str, str] = {}
    if getattr(args, "config", None):
        file_values = _read_config_file(args.config)

    def pick(key: str, flag_value):
        if flag_value is not None:
            return flag_value
        if key in file_values:
            return _coerce(key.replace("-", "_"), file_values[key])
        return _DEFAULTS.get(key.replace("-", "_"))

    settings = {
        "data": pick("data", getattr(args, "data", None)),
        "model": pick("model", getattr(args, "model", None)),
        "out": pick("out", getattr(args, "out", None)),
        "report_format": pick("report-format", getattr(args, "report_format", None)),
        "seed": pick("seed", getattr(args, "seed", None)),
        "threads": pick("threads", getattr(args, "threads", None)),
        "rounds": pick("rounds", getattr(args, "rounds", None)),
        "eta": pick("eta", getattr(args, "eta", None)),
        "gamma": pick("gamma", getattr(args, "gamma", None)),
        "lambda": pick("lambda", getattr(args, "lambda_", None)),
        "max_depth": pick("max-depth", getattr(args, "max_depth", None)),
        "min_child_weight": pick("min-child-weight",
                                 getattr(args, "min_child_weight", None)),
        "folds": pick("folds", getattr(args, "folds", None)),
        "test_fraction": pick("test-fraction", getattr(args, "test_fraction", None)),
    }
    if settings["threads"] is None or settings["threads"] == 0:
        env = os.environ.get("BOOSTRAY_THREADS", "").strip()
        if env and getattr(args, "threads", None) is None and "threads" not in file_values:
            try:
                settings["threads"] = int(env)
            except ValueError:
                raise ConfigError(f"BOOSTRAY_THREADS is not an integer: {env!r}")
    if settings["report_format"] not in REPORT_FORMATS:
        raise ConfigError(f"unknown report format {settings['report_format']!r}")
    return settings


def _hyper_params(settings: dict) -> HyperParams:
    return HyperParams(
        num_rounds=settings["rounds"],
        eta=settings["eta"],
        gamma=settings["gamma"],
        lambda_=settings["lambda"],
        max_depth=settings["max_depth"],
        min_child_weight=settings["min_child_weight"],
    )


def _apply_threads(settings: dict) -> None:
    n = settings["threads"]
    if n is None or n == 0:
        return
    if n < 0:
        raise ConfigError(f"threads must be >= 1 (or 0 for all cores), got {n}")
    import numba

    numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))


def _load_dataset(settings: dict) -> Dataset:
    path = settings["data"]
    if not path:
        raise ConfigError("--data is required for this command")
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"data file not found: {path}")
    if p.suffix.lower() == ".fmx":
        return load_fmx(p)
    if p.suffix.lower() == ".csv":
        return load_csv(p)
    raise FormatError(f"unrecognized data extension {p.suffix!r} (want .fmx or .csv)")


def _objective_for(dataset: Dataset) -> ObjectiveSpec:
    kind = BINARY_LOGISTIC if dataset.n_classes == 2 else SOFTMAX
    return ObjectiveSpec(kind, dataset.n_classes)


def _emit(text: str, out_path) -> None:
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# report rendering
# ---------------------------------------------------------------------------

def _metric_rows(report: MetricsReport) -> list[tuple[str, float]]:
    rows = []
    for name, cm in zip(report.confusion.class_names, report.per_class):
        for metric in ("sensitivity", "specificity", "precision", "f1"):
            rows.append((f"{metric}[{name}]", cm.value(metric)))
    for metric in ("sensitivity", "specificity", "precision", "f1"):
        rows.append((f"{metric}[macro]", report.macro.value(metric)))
    rows.append(("accuracy", report.accuracy))
    return rows


def _cv_table(result: CvResult) -> list[tuple[str, list[float], float]]:
    """(metric, per-fold values, average) rows in a fixed order."""
    fold_rows = [_metric_rows(r) for r in result.per_fold]
    avg_report_rows = []
    for c in range(len(result.per_fold[0].confusion.class_names)):
        for metric in ("sensitivity", "specificity", "precision", "f1"):
            avg_report_rows.append(result.averaged.per_class[c].value(metric))
    for metric in ("sensitivity", "specificity", "precision", "f1"):
        avg_report_rows.append(result.averaged.macro.value(metric))
    avg_report_rows.append(result.averaged.accuracy)

    table = []
    for i, (label, _) in enumerate(fold_rows[0]):
        values = [rows[i][1] for rows in fold_rows]
        table.append((label, values, avg_report_rows[i]))
    return table


def _render_cv_text(result: CvResult) -> str:
    k = len(result.per_fold)
    headers = ["Metric"] + [f"Fold {i + 1}" for i in range(k)] + ["Average"]
    lines = []
    widths = [24] + [9] * (k + 1)
    head = headers[0].ljust(widths[0])
    head += "  " + "  ".join(h.rjust(w) for h, w in zip(headers[1:], widths[1:]))
    lines.append(head.rstrip())
    for label, values, avg in _cv_table(result):
        cells = [label.ljust(widths[0])]
        cells += [f"{100 * v:9.2f}" for v in values]
        cells += [f"{100 * avg:9.2f}"]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def _render_cv_csv(result: CvResult) -> str:
    k = len(result.per_fold)
    lines = ["metric," + ",".join(f"fold_{i + 1}" for i in range(k)) + ",average"]
    for label, values, avg in _cv_table(result):
        lines.append(label + "," + ",".join(repr(v) for v in values) + f",{avg!r}")
    return "\n".join(lines) + "\n"


def _report_dict(report: MetricsReport) -> dict:
    return {
        "accuracy": report.accuracy,
        "per_class": {
            name: {
                "sensitivity": m.sensitivity,
                "specificity": m.specificity,
                "precision": m.precision,
                "f1": m.f1,
                "degenerate": sorted(m.degenerate),
            }
            for name, m in zip(report.confusion.class_names, report.per_class)
        },
        "macro": {
            "sensitivity": report.macro.sensitivity,
            "specificity": report.macro.specificity,
            "precision": report.macro.precision,
            "f1": report.macro.f1,
        },
        "confusion": report.confusion.counts.tolist(),
        "class_names": list(report.confusion.class_names),
    }


def _render_cv_json(result: CvResult) -> str:
    doc = {
        "kind": "cv",
        "folds": [_report_dict(r) for r in result.per_fold],
        "average": {
            "accuracy": result.averaged.accuracy,
            "per_class": {
                name: {
                    "sensitivity": m.sensitivity,
                    "specificity": m.specificity,
                    "precision": m.precision,
                    "f1": m.f1,
                }
                for name, m in zip(
                    result.per_fold[0].confusion.class_names,
                    result.averaged.per_class,
                )
            },
            "macro": {
                "sensitivity": result.averaged.macro.sensitivity,
                "specificity": result.averaged.macro.specificity,
                "precision": result.averaged.macro.precision,
                "f1": result.averaged.macro.f1,
            },
        },
    }
    return json.dumps(doc, indent=2) + "\n"


def _render_confusion_text(report: MetricsReport) -> str:
    names = report.confusion.class_names
    width = max(12, max(len(n) for n in names) + 2)
    lines = ["confusion matrix (rows = true, cols = predicted):"]
    lines.append(" " * width + "".join(n.rjust(width) for n in names))
    for name, row in zip(names, report.confusion.counts):
        lines.append(name.rjust(width) + "".join(str(int(v)).rjust(width) for v in row))
    return "\n".join(lines) + "\n"


def _render_holdout_text(report: MetricsReport) -> str:
    lines = ["Metric".ljust(24) + "  " + "Value".rjust(9)]
    for label, value in _metric_rows(report):
        lines.append(label.ljust(24) + "  " + f"{100 * value:9.2f}")
    return "\n".join(lines) + "\n\n" + _render_confusion_text(report)


def _render_holdout_csv(report: MetricsReport) -> str:
    lines = ["metric,value"]
    for label, value in _metric_rows(report):
        lines.append(f"{label},{value!r}")
    names = report.confusion.class_names
    for name, row in zip(names, report.confusion.counts):
        lines.append("confusion[" + name + "]," + ";".join(str(int(v)) for v in row))
    return "\n".join(lines) + "\n"


def _render_holdout_json(report: MetricsReport) -> str:
    return json.dumps({"kind": "holdout", "report": _report_dict(report)},
                      indent=2) + "\n"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_train(settings: dict) -> int:
    dataset = _load_dataset(settings)
    out = settings["out"]
    if not out:
        raise ConfigError("--out is required: where to write the trained model")
    params = _hyper_params(settings)
    objective = _objective_for(dataset)
    model, _, history = _train(dataset, params, objective)
    save_model(model, out)
    print(
        f"trained {len(model.trees)} rounds, {model.n_trees} trees, "
        f"final training objective {history[-1]:.6f}"
    )
    return 0


def cmd_predict(settings: dict) -> int:
    if not settings["model"]:
        raise ConfigError("--model is required for predict")
    model_path = Path(settings["model"])
    if not model_path.exists():
        raise FileNotFoundError(f"model file not found: {model_path}")
    model = load_model(model_path)
    dataset = _load_dataset(settings)
    proba = predict_proba(model, dataset.features)
    pred = np.argmax(proba, axis=1)
    lines = ["row_index,predicted_class_name,"
             + ",".join(f"p_class{c}" for c in range(proba.shape[1]))]
    for i in range(proba.shape[0]):
        name = model.class_names[pred[i]]
        probs = ",".join(repr(float(p)) for p in proba[i])
        lines.append(f"{i},{name},{probs}")
    _emit("\n".join(lines) + "\n", settings["out"])
    return 0


def cmd_cv(settings: dict) -> int:
    if settings["folds"] < 2:
        raise ConfigError(f"--folds must be at least 2, got {settings['folds']}")
    dataset = _load_dataset(settings)
    params = _hyper_params(settings)
    result = run_cv(dataset, params, _objective_for(dataset),
                    k=settings["folds"], seed=settings["seed"])
    renderer = {
        "text": _render_cv_text,
        "csv": _render_cv_csv,
        "json": _render_cv_json,
    }[settings["report_format"]]
    _emit(renderer(result), settings["out"])
    return 0


def cmd_holdout(settings: dict) -> int:
    fraction = settings["test_fraction"]
    if not 0.0 < fraction < 1.0:
        raise ConfigError(f"--test-fraction must be in (0, 1), got {fraction}")
    dataset = _load_dataset(settings)
    params = _hyper_params(settings)
    report = run_holdout(dataset, params, _objective_for(dataset),
                         test_fraction=fraction, seed=settings["seed"])
    renderer = {
        "text": _render_holdout_text,
        "csv": _render_holdout_csv,
        "json": _render_holdout_json,
    }[settings["report_format"]]
    _emit(renderer(report), settings["out"])
    return 0


def cmd_inspect(settings: dict) -> int:
    if not settings["model"]:
        raise ConfigError("--model is required for inspect")
    model_path = Path(settings["model"])
    if not model_path.exists():
        raise FileNotFoundError(f"model file not found: {model_path}")
    model = load_model(model_path)
    p = model.params
    lines = [
        f"objective: {model.objective.kind} ({model.objective.n_classes} classes: "
        + ", ".join(model.class_names) + ")",
        f"params: rounds={p.num_rounds} eta={p.eta} gamma={p.gamma} "
        f"lambda={p.lambda_} max_depth={p.max_depth} "
        f"min_child_weight={p.min_child_weight}",
        f"n_features: {model.n_features}",
        f"rounds applied: {len(model.trees)}",
        f"tree count: {model.n_trees}",
    ]
    leaf_counts: dict[int, int] = {}
    gain_by_feature = np.zeros(model.n_features)
    for round_trees in model.trees:
        for tree in round_trees:
            leaf_counts[tree.n_leaves] = leaf_counts.get(tree.n_leaves, 0) + 1
            internal = tree.feature != LEAF
            np.add.at(gain_by_feature, tree.feature[internal], tree.gain[internal])
    hist = " ".join(f"{k}:{v}" for k, v in sorted(leaf_counts.items()))
    lines.append(f"leaf-count histogram: {hist if hist else '(no trees)'}")
    lines.append("top features by total gain:")
    order = np.argsort(-gain_by_feature, kind="stable")
    shown = 0
    for f in order:
        if gain_by_feature[f] <= 0.0 or shown >= 20:
            break
        shown += 1
        lines.append(f"  {shown:2d}. f{f}  gain={gain_by_feature[f]:.6f}")
    if shown == 0:
        lines.append("  (none)")
    _emit("\n".join(lines) + "\n", settings["out"])
    return 0


_COMMANDS = {
    "train": cmd_train,
    "predict": cmd_predict,
    "cv": cmd_cv,
    "holdout": cmd_holdout,
    "inspect": cmd_inspect,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        settings = _resolve(args)
        _apply_threads(settings)
        return _COMMANDS[args.command](settings)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (BoostrayError, FileNotFoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - internal failure guard
        print(f"error: internal: {exc!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
