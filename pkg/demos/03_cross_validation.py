#!/usr/bin/env python3
"""Stratified 5-fold cross-validation with the full metric suite.

Mirrors the two-class evaluation protocol: each class is shuffled with
its own seeded stream and dealt round-robin into folds, so per-fold
class proportions match the dataset's 500/125 imbalance exactly.
"""

import numpy as np

from boostray import Dataset, HyperParams, ObjectiveSpec, run_cv, stratified_kfold

# Imbalanced two-class data shaped like a 625-image screening problem:
# 500 no-finding rows, 125 covid rows, with informative features.
rng = np.random.default_rng(42)
n_neg, n_pos, d = 500, 125, 32
X = np.vstack([
    rng.normal(0.0, 1.0, size=(n_neg, d)),
    rng.normal(0.9, 1.0, size=(n_pos, d)),
]).astype(np.float32)
y = np.array([0] * n_neg + [1] * n_pos, dtype=np.int32)
ds = Dataset(X, y, ("no_finding", "covid"))

plan = stratified_kfold(ds, k=5, seed=42)
for i, (train_idx, test_idx) in enumerate(plan.folds):
    counts = np.bincount(ds.labels[test_idx], minlength=2)
    print(f"fold {i + 1}: test={len(test_idx):3d} rows "
          f"({counts[0]} no_finding / {counts[1]} covid)")

result = run_cv(ds, HyperParams(), ObjectiveSpec("binary-logistic", 2),
                k=5, seed=42)

# Per-fold metrics for the covid class (sensitivity = covid detection
# rate), plus the fold average, metrics-by-folds like a results table.
covid = ds.class_names.index("covid")
header = "metric        " + "".join(f"  fold{i + 1}" for i in range(5)) + "    avg"
print()
print(header)
for name in ("sensitivity", "specificity", "precision", "f1"):
    row = [getattr(r.per_class[covid], name) for r in result.per_fold]
    avg = getattr(result.averaged.per_class[covid], name)
    print(f"{name:<14}" + "".join(f" {100 * v:6.2f}" for v in row)
          + f" {100 * avg:6.2f}")
accs = [r.accuracy for r in result.per_fold]
print(f"{'accuracy':<14}" + "".join(f" {100 * v:6.2f}" for v in accs)
      + f" {100 * result.averaged.accuracy:6.2f}")

# The averaged block is the arithmetic mean of the fold scalars.
assert abs(result.averaged.accuracy - np.mean(accs)) < 1e-12
