"""Feature dataset loading, validation, splitting, and persistence.

Two on-disk representations are supported: a human-readable CSV with a
``label,f0,f1,...`` header, and the FMX1 binary interchange format (see
:func:`write_fmx` for the exact byte layout).  Features are stored as
float32; that is the canonical precision for round-trips.
"""

from __future__ import annotations

import csv
import math
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataError, FormatError, StratificationError

DEFAULT_SEED = 42

_FMX_MAGIC = b"FMX1"
_FMX_VERSION = 1
_FMX_HEADER = struct.Struct("<4sIQQI")  # magic, version, n_rows, n_cols, n_classes


def validate_features(features: np.ndarray) -> np.ndarray:
    """Check the feature-matrix invariants and return the array as float32.

    A feature matrix is a 2-D row-major array with at least one row and
    one column and no NaN or infinite entries.
    """
    arr = np.ascontiguousarray(features, dtype=np.float32)
    if arr.ndim != 2:
        raise DataError(f"feature matrix must be 2-D, got {arr.ndim}-D")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DataError(f"feature matrix must be at least 1x1, got {arr.shape}")
    if not np.isfinite(arr).all():
        bad = np.argwhere(~np.isfinite(arr))[0]
        raise DataError(f"non-finite feature value at (row {bad[0]}, col {bad[1]})")
    return arr


@dataclass(frozen=True)
class Dataset:
    """A feature matrix with integer class labels and a class-name table.

    Immutable after construction; the backing arrays are marked read-only
    so instances are safe to share across threads.
    """

    features: np.ndarray
    labels: np.ndarray
    class_names: tuple[str, ...]

    def __post_init__(self):
        features = validate_features(self.features)
        labels = np.ascontiguousarray(self.labels, dtype=np.int32)
        if labels.ndim != 1 or labels.shape[0] != features.shape[0]:
            raise DataError(
                f"labels length {labels.shape} does not match {features.shape[0]} rows"
            )
        names = tuple(self.class_names)
        if len(names) == 0:
            raise DataError("class_names is empty")
        if labels.min() < 0 or labels.max() >= len(names):
            raise DataError(
                f"labels must lie in [0, {len(names)}), got range "
                f"[{labels.min()}, {labels.max()}]"
            )
        present = np.bincount(labels, minlength=len(names))
        missing = np.flatnonzero(present == 0)
        if missing.size:
            raise DataError(f"class {names[missing[0]]!r} has no rows")
        features.flags.writeable = False
        labels.flags.writeable = False
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "class_names", names)

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]

    @property
    def n_cols(self) -> int:
        return self.features.shape[1]

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.n_classes)

    def subset(self, indices: np.ndarray) -> "Dataset":
        """Copy of the selected rows, used by the cross-validation drivers.

        Every class must still be present in the subset.
        """
        idx = np.asarray(indices, dtype=np.int64)
        return Dataset(self.features[idx], self.labels[idx], self.class_names)


@dataclass(frozen=True)
class SplitPlan:
    """An ordered list of (train_indices, test_indices) pairs.

    Within each pair the two index lists are disjoint, sorted ascending,
    and together cover every row exactly once.
    """

    folds: tuple[tuple[np.ndarray, np.ndarray], ...]
    seed: int
    kind: str  # "k-fold" | "holdout"

    def __post_init__(self):
        frozen = []
        for train, test in self.folds:
            train = np.ascontiguousarray(train, dtype=np.int64)
            test = np.ascontiguousarray(test, dtype=np.int64)
            train.flags.writeable = False
            test.flags.writeable = False
            frozen.append((train, test))
        object.__setattr__(self, "folds", tuple(frozen))


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------

def load_csv(path) -> Dataset:
    """Load a labeled feature CSV.

    The first line must be a ``label,f0,f1,...`` header; the label column
    holds class-name strings.  Class indices are assigned in order of first
    appearance.
    """
    path = Path(path)
    with path.open("r", newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FormatError(f"{path}: empty file") from None
        if not header or header[0] != "label":
            raise FormatError(f"{path}: first header column must be 'label'")
        n_cols = len(header) - 1
        if n_cols < 1:
            raise FormatError(f"{path}: header declares no feature columns")

        class_index: dict[str, int] = {}
        labels: list[int] = []
        rows: list[np.ndarray] = []
        for line_no, parts in enumerate(reader, start=2):
            if not parts:
                continue
            if len(parts) != n_cols + 1:
                raise FormatError(
                    f"{path}: line {line_no} has {len(parts)} columns, expected {n_cols + 1}"
                )
            name = parts[0]
            if name not in class_index:
                class_index[name] = len(class_index)
            labels.append(class_index[name])
            try:
                values = np.array(parts[1:], dtype=np.float32)
            except ValueError:
                row_i = len(rows)
                for col, cell in enumerate(parts[1:]):
                    try:
                        float(cell)
                    except ValueError:
                        raise DataError(
                            f"{path}: unparsable value {cell!r} at (row {row_i}, col {col})"
                        ) from None
                raise
            bad = np.flatnonzero(~np.isfinite(values))
            if bad.size:
                raise DataError(
                    f"{path}: non-finite value at (row {len(rows)}, col {bad[0]})"
                )
            rows.append(values)

    if not rows:
        raise FormatError(f"{path}: no data rows")
    features = np.vstack(rows)
    return Dataset(features, np.array(labels, dtype=np.int32), tuple(class_index))


def _format_f32(value: np.float32) -> str:
    """Shortest decimal string that parses back to the same float32 bits."""
    return np.format_float_positional(value, unique=True, trim="0")


def write_csv(dataset: Dataset, path) -> None:
    """Write a dataset as CSV, preserving float32 precision exactly."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["label"] + [f"f{i}" for i in range(dataset.n_cols)])
        for i in range(dataset.n_rows):
            name = dataset.class_names[dataset.labels[i]]
            writer.writerow([name] + [_format_f32(v) for v in dataset.features[i]])


# ---------------------------------------------------------------------------
# FMX1 binary format
# ---------------------------------------------------------------------------

def write_fmx(dataset: Dataset, path) -> None:
    """Write a dataset in the FMX1 binary layout.

    Little-endian throughout: magic ``FMX1``, u32 version = 1, u64 n_rows,
    u64 n_cols, u32 n_classes, then n_rows u32 labels, then
    n_rows x n_cols float32 features in row-major order.  Class names go
    to a companion ``<stem>.classes`` file, one UTF-8 name per line; line
    order defines the class indices.
    """
    path = Path(path)
    header = _FMX_HEADER.pack(
        _FMX_MAGIC, _FMX_VERSION, dataset.n_rows, dataset.n_cols, dataset.n_classes
    )
    with path.open("wb") as fh:
        fh.write(header)
        fh.write(dataset.labels.astype("<u4").tobytes())
        fh.write(dataset.features.astype("<f4").tobytes())
    classes_path = path.with_suffix(".classes")
    classes_path.write_text(
        "".join(name + "\n" for name in dataset.class_names), encoding="utf-8"
    )


def load_fmx(path) -> Dataset:
    """Load a dataset written by :func:`write_fmx`."""
    path = Path(path)
    raw = path.read_bytes()
    if len(raw) < _FMX_HEADER.size:
        raise FormatError(f"{path}: file shorter than the 28-byte FMX1 header")
    magic, version, n_rows, n_cols, n_classes = _FMX_HEADER.unpack_from(raw)
    if magic != _FMX_MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}, expected {_FMX_MAGIC!r}")
    if version != _FMX_VERSION:
        raise FormatError(f"{path}: unsupported FMX version {version}")
    expected = _FMX_HEADER.size + 4 * n_rows + 4 * n_rows * n_cols
    if len(raw) != expected:
        raise FormatError(
            f"{path}: payload is {len(raw)} bytes, layout requires {expected}"
        )
    off = _FMX_HEADER.size
    raw_labels = np.frombuffer(raw, dtype="<u4", count=n_rows, offset=off)
    if raw_labels.size and raw_labels.max() >= n_classes:
        raise FormatError(
            f"{path}: label {raw_labels.max()} out of range for {n_classes} classes"
        )
    labels = raw_labels.astype(np.int32)
    off += 4 * n_rows
    features = np.frombuffer(raw, dtype="<f4", count=n_rows * n_cols, offset=off)
    features = features.reshape(n_rows, n_cols).astype(np.float32)

    classes_path = path.with_suffix(".classes")
    if not classes_path.exists():
        raise FormatError(f"{path}: companion file {classes_path} not found")
    names = classes_path.read_text(encoding="utf-8").splitlines()
    if len(names) != n_classes:
        raise FormatError(
            f"{classes_path}: {len(names)} class names, header declares {n_classes}"
        )
    return Dataset(features, labels, tuple(names))


# ---------------------------------------------------------------------------
# Stratified splitting
# ---------------------------------------------------------------------------

def _class_permutation(labels: np.ndarray, cls: int, seed: int) -> np.ndarray:
    """Seeded shuffle of one class's row indices; the RNG stream is derived
    from (seed, class index) so folds never depend on other classes."""
    rows = np.flatnonzero(labels == cls)
    rng = np.random.default_rng([seed, cls])
    return rows[rng.permutation(rows.size)]


def stratified_kfold(dataset: Dataset, k: int, seed: int = DEFAULT_SEED) -> SplitPlan:
    """Partition rows into k folds preserving per-class proportions.

    Each class is shuffled with its own seeded stream, then dealt
    round-robin into the folds, so per-fold class counts differ from
    class_total / k by at most one.
    """
    if k < 2:
        raise StratificationError(f"k must be at least 2, got {k}")
    counts = dataset.class_counts()
    for cls, count in enumerate(counts):
        if count < k:
            raise StratificationError(
                f"class {dataset.class_names[cls]!r} has {count} rows, fewer than k={k}"
            )
    test_sets: list[list[int]] = [[] for _ in range(k)]
    for cls in range(dataset.n_classes):
        dealt = _class_permutation(dataset.labels, cls, seed)
        for j, row in enumerate(dealt):
            test_sets[j % k].append(row)

    all_rows = np.arange(dataset.n_rows, dtype=np.int64)
    folds = []
    for test in test_sets:
        test_idx = np.sort(np.array(test, dtype=np.int64))
        mask = np.ones(dataset.n_rows, dtype=bool)
        mask[test_idx] = False
        folds.append((all_rows[mask], test_idx))
    return SplitPlan(tuple(folds), seed=seed, kind="k-fold")


def stratified_holdout(
    dataset: Dataset, test_fraction: float, seed: int = DEFAULT_SEED
) -> SplitPlan:
    """Single stratified train/test split.

    Per-class test count is round(test_fraction * class_total), adjusted
    by +-1 on the classes with the largest rounding residue so the total
    matches round(test_fraction * n_rows).
    """
    if not 0.0 < test_fraction < 1.0:
        raise StratificationError(
            f"test_fraction must be in (0, 1), got {test_fraction}"
        )
    counts = dataset.class_counts()
    exact = test_fraction * counts
    base = np.floor(exact + 0.5).astype(np.int64)
    target = math.floor(test_fraction * dataset.n_rows + 0.5)
    residue = exact - base
    # Adjust toward the global target, preferring classes whose rounding
    # left the most residue in the needed direction; ties break on index.
    while base.sum() != target:
        if base.sum() < target:
            order = np.lexsort((np.arange(len(base)), -residue))
            for cls in order:
                if base[cls] < counts[cls]:
                    base[cls] += 1
                    residue[cls] -= 1.0
                    break
        else:
            order = np.lexsort((np.arange(len(base)), residue))
            for cls in order:
                if base[cls] > 0:
                    base[cls] -= 1
                    residue[cls] += 1.0
                    break
    for cls, take in enumerate(base):
        if take < 1 or take >= counts[cls]:
            raise StratificationError(
                f"test_fraction {test_fraction} leaves class "
                f"{dataset.class_names[cls]!r} empty on one side "
                f"({take} of {counts[cls]} rows in test)"
            )

    test_rows: list[int] = []
    for cls in range(dataset.n_classes):
        dealt = _class_permutation(dataset.labels, cls, seed)
        test_rows.extend(dealt[: base[cls]])
    test_idx = np.sort(np.array(test_rows, dtype=np.int64))
    mask = np.ones(dataset.n_rows, dtype=bool)
    mask[test_idx] = False
    train_idx = np.arange(dataset.n_rows, dtype=np.int64)[mask]
    return SplitPlan(((train_idx, test_idx),), seed=seed, kind="holdout")
