"""Confusion matrices, classification metrics, and experiment drivers.

Multiclass metrics reduce the confusion matrix one-vs-rest: each class in
turn is treated as positive, yielding sensitivity, specificity, precision,
and F1 per class plus unweighted macro averages.  Degenerate 0/0 ratios
are reported as 0 and flagged, so reports stay aggregatable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boosting import BoostModel, HyperParams, predict_class, train
from .data import Dataset, SplitPlan, stratified_holdout, stratified_kfold
from .errors import ShapeError
from .objectives import ObjectiveSpec

METRIC_NAMES = ("sensitivity", "specificity", "precision", "f1")


@dataclass(frozen=True)
class ConfusionMatrix:
    """counts[i][j] = rows with true class i predicted as class j."""

    counts: np.ndarray
    class_names: tuple[str, ...]

    def __post_init__(self):
        counts = np.ascontiguousarray(self.counts, dtype=np.int64)
        if counts.ndim != 2 or counts.shape[0] != counts.shape[1]:
            raise ShapeError(f"confusion matrix must be square, got {counts.shape}")
        if counts.shape[0] != len(self.class_names):
            raise ShapeError(
                f"{len(self.class_names)} class names for a "
                f"{counts.shape[0]}x{counts.shape[0]} matrix"
            )
        if (counts < 0).any():
            raise ValueError("confusion counts must be nonnegative")
        counts.flags.writeable = False
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "class_names", tuple(self.class_names))

    @property
    def n_classes(self) -> int:
        return self.counts.shape[0]

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class ClassMetrics:
    """One-vs-rest metrics for a single positive class.

    ``degenerate`` names the metrics whose ratio was 0/0 and was reported
    as 0 by convention.
    """

    sensitivity: float
    specificity: float
    precision: float
    f1: float
    degenerate: frozenset[str] = frozenset()

    def value(self, name: str) -> float:
        return getattr(self, name)


@dataclass(frozen=True)
class MetricsReport:
    per_class: tuple[ClassMetrics, ...]
    macro: ClassMetrics
    accuracy: float
    confusion: ConfusionMatrix


@dataclass(frozen=True)
class AveragedMetrics:
    """Arithmetic means of scalar metrics across folds (no confusion matrix:
    mean accuracy is not trace/total when fold sizes differ by one)."""

    per_class: tuple[ClassMetrics, ...]
    macro: ClassMetrics
    accuracy: float


@dataclass(frozen=True)
class CvResult:
    per_fold: tuple[MetricsReport, ...]
    averaged: AveragedMetrics
    plan: SplitPlan
    params: HyperParams


def confusion(y_true, y_pred, classes) -> ConfusionMatrix:
    """Count (true, predicted) pairs into a K x K matrix.

    ``classes`` is either the class count K (names default to their
    indices) or the ordered class-name sequence.
    """
    if isinstance(classes, (int, np.integer)):
        names = tuple(str(i) for i in range(classes))
    else:
        names = tuple(classes)
    yt = np.asarray(y_true, dtype=np.int64)
    yp = np.asarray(y_pred, dtype=np.int64)
    if yt.shape != yp.shape or yt.ndim != 1:
        raise ShapeError(f"label vectors must match, got {yt.shape} and {yp.shape}")
    k = len(names)
    if yt.size and (yt.min() < 0 or yt.max() >= k or yp.min() < 0 or yp.max() >= k):
        raise ValueError(f"class indices must lie in [0, {k})")
    counts = np.bincount(yt * k + yp, minlength=k * k).reshape(k, k)
    return ConfusionMatrix(counts, names)


def _ratio(num: int, den: int, name: str, degenerate: set[str]) -> float:
    if den == 0:
        degenerate.add(name)
        return 0.0
    return num / den


def _one_vs_rest(cm: ConfusionMatrix, positive: int) -> ClassMetrics:
    counts = cm.counts
    tp = int(counts[positive, positive])
    fn = int(counts[positive].sum()) - tp
    fp = int(counts[:, positive].sum()) - tp
    tn = cm.total - tp - fn - fp
    degenerate: set[str] = set()
    sensitivity = _ratio(tp, tp + fn, "sensitivity", degenerate)
    specificity = _ratio(tn, tn + fp, "specificity", degenerate)
    precision = _ratio(tp, tp + fp, "precision", degenerate)
    if precision + sensitivity > 0.0:
        f1 = 2.0 * precision * sensitivity / (precision + sensitivity)
    else:
        degenerate.add("f1")
        f1 = 0.0
    return ClassMetrics(sensitivity, specificity, precision, f1,
                        frozenset(degenerate))


def _macro(per_class: tuple[ClassMetrics, ...]) -> ClassMetrics:
    means = {
        name: float(np.mean([m.value(name) for m in per_class]))
        for name in METRIC_NAMES
    }
    flags = frozenset().union(*(m.degenerate for m in per_class))
    return ClassMetrics(degenerate=flags, **means)


def multiclass_metrics(cm: ConfusionMatrix) -> MetricsReport:
    """One-vs-rest reduction of a K >= 2 confusion matrix."""
    if cm.n_classes < 2:
        raise ShapeError(f"need at least 2 classes, got {cm.n_classes}")
    if cm.total == 0:
        raise ValueError("confusion matrix is empty")
    per_class = tuple(_one_vs_rest(cm, c) for c in range(cm.n_classes))
    accuracy = float(np.trace(cm.counts)) / cm.total
    return MetricsReport(per_class, _macro(per_class), accuracy, cm)


def binary_metrics(cm: ConfusionMatrix, positive: int) -> MetricsReport:
    """Two-class report; ``positive`` names the class whose detection the
    sensitivity/precision rows describe (its block is per_class[positive])."""
    if cm.n_classes != 2:
        raise ShapeError(f"binary metrics need a 2x2 matrix, got {cm.n_classes}")
    if positive not in (0, 1):
        raise ValueError(f"positive class must be 0 or 1, got {positive}")
    return multiclass_metrics(cm)


def evaluate(model: BoostModel, dataset: Dataset, indices) -> MetricsReport:
    """Predict the given rows and score them against their labels."""
    idx = np.asarray(indices, dtype=np.int64)
    y_pred = predict_class(model, dataset.features[idx])
    return multiclass_metrics(
        confusion(dataset.labels[idx], y_pred, dataset.class_names)
    )


def _average(per_fold: tuple[MetricsReport, ...]) -> AveragedMetrics:
    n_classes = per_fold[0].confusion.n_classes
    per_class = []
    for c in range(n_classes):
        means = {
            name: float(np.mean([r.per_class[c].value(name) for r in per_fold]))
            for name in METRIC_NAMES
        }
        flags = frozenset().union(*(r.per_class[c].degenerate for r in per_fold))
        per_class.append(ClassMetrics(degenerate=flags, **means))
    macro_means = {
        name: float(np.mean([r.macro.value(name) for r in per_fold]))
        for name in METRIC_NAMES
    }
    macro_flags = frozenset().union(*(r.macro.degenerate for r in per_fold))
    return AveragedMetrics(
        per_class=tuple(per_class),
        macro=ClassMetrics(degenerate=macro_flags, **macro_means),
        accuracy=float(np.mean([r.accuracy for r in per_fold])),
    )


def run_cv(
    dataset: Dataset,
    params: HyperParams,
    objective: ObjectiveSpec,
    k: int,
    seed: int,
) -> CvResult:
    """Stratified k-fold: train on each fold's train rows, score its test rows."""
    plan = stratified_kfold(dataset, k, seed)
    reports = []
    for train_idx, test_idx in plan.folds:
        model = train(dataset.subset(train_idx), params, objective)
        reports.append(evaluate(model, dataset, test_idx))
    per_fold = tuple(reports)
    return CvResult(per_fold, _average(per_fold), plan, params)


def run_holdout(
    dataset: Dataset,
    params: HyperParams,
    objective: ObjectiveSpec,
    test_fraction: float,
    seed: int,
) -> MetricsReport:
    """Single stratified train/test split evaluation."""
    plan = stratified_holdout(dataset, test_fraction, seed)
    train_idx, test_idx = plan.folds[0]
    model = train(dataset.subset(train_idx), params, objective)
    return evaluate(model, dataset, test_idx)
