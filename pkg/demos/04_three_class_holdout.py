#!/usr/bin/env python3
"""Three-class softmax training with an 80/20 stratified holdout.

With three or more classes every boosting round fits one tree per class
against the softmax cross-entropy gradients; prediction takes the argmax
over class margins.
"""

import numpy as np

from boostray import (
    Dataset,
    HyperParams,
    ObjectiveSpec,
    confusion,
    multiclass_metrics,
    predict_class,
    run_holdout,
    stratified_holdout,
    train,
)

# 125 / 500 / 500 class mix, moderately informative features.
rng = np.random.default_rng(3)
sizes = (125, 500, 500)
centers = (1.2, 0.0, -1.2)
X = np.vstack([
    rng.normal(c, 1.0, size=(n, 24)) for n, c in zip(sizes, centers)
]).astype(np.float32)
y = np.concatenate([np.full(n, i, dtype=np.int32) for i, n in enumerate(sizes)])
ds = Dataset(X, y, ("covid", "pneumonia", "no_finding"))

plan = stratified_holdout(ds, test_fraction=0.2, seed=42)
train_idx, test_idx = plan.folds[0]
test_counts = np.bincount(ds.labels[test_idx], minlength=3)
print("test rows per class:", dict(zip(ds.class_names, test_counts.tolist())))

# run_holdout trains on the 80% side and scores the 20% side in one call.
report = run_holdout(ds, HyperParams(), ObjectiveSpec("softmax", 3),
                     test_fraction=0.2, seed=42)
print(f"holdout accuracy: {100 * report.accuracy:.2f}%")

print("\nconfusion matrix (rows = true, cols = predicted):")
names = report.confusion.class_names
print(" " * 12 + "".join(f"{n:>12}" for n in names))
for name, row in zip(names, report.confusion.counts):
    print(f"{name:>12}" + "".join(f"{int(v):12d}" for v in row))

print("\nper-class one-vs-rest metrics:")
for name, m in zip(names, report.per_class):
    print(f"{name:>12}: sensitivity={m.sensitivity:.3f} "
          f"specificity={m.specificity:.3f} precision={m.precision:.3f} "
          f"f1={m.f1:.3f}")
print(f"{'macro':>12}: sensitivity={report.macro.sensitivity:.3f} "
      f"specificity={report.macro.specificity:.3f} "
      f"precision={report.macro.precision:.3f} f1={report.macro.f1:.3f}")

# The same pieces compose by hand: train on the plan's train rows, then
# score any rows you like.
model = train(ds.subset(train_idx), HyperParams(num_rounds=20),
              ObjectiveSpec("softmax", 3))
pred = predict_class(model, ds.features[test_idx])
cm = confusion(ds.labels[test_idx], pred, ds.class_names)
print("\n20-round model accuracy:",
      f"{100 * multiclass_metrics(cm).accuracy:.2f}%")
