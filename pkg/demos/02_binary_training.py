#!/usr/bin/env python3
"""Train a boosted-tree classifier on a separable two-class problem.

The model is a sum of regression trees fit to the gradients and hessians
of the logistic loss; each round's tree is found by exact greedy split
search and its leaf scores are shrunk by the learning rate when margins
accumulate.
"""

import numpy as np

from boostray import (
    Dataset,
    HyperParams,
    ObjectiveSpec,
    predict_class,
    predict_margin,
    predict_proba,
    train,
)

rng = np.random.default_rng(7)
X = np.vstack([
    rng.normal(-2.0, 1.0, size=(100, 5)),
    rng.normal(+2.0, 1.0, size=(100, 5)),
]).astype(np.float32)
y = np.array([0] * 100 + [1] * 100, dtype=np.int32)
ds = Dataset(X, y, ("covid", "normal"))

# The defaults are the reference configuration: 100 exact-greedy trees,
# learning rate 0.44, gamma 0, depth 6, lambda 1.
params = HyperParams()
model = train(ds, params, ObjectiveSpec("binary-logistic", 2))

pred = predict_class(model, ds.features)
print("training accuracy:", (pred == ds.labels).mean())

# Margins are the raw additive scores; probabilities apply the logistic
# link, with class 1 as the positive column.
margins = predict_margin(model, ds.features[:3])
proba = predict_proba(model, ds.features[:3])
for i in range(3):
    print(f"row {i}: margin={margins[i, 0]:+.3f}  "
          f"p({ds.class_names[0]})={proba[i, 0]:.4f}  "
          f"p({ds.class_names[1]})={proba[i, 1]:.4f}")

# Fewer rounds / shallower trees underfit gracefully.
small = train(ds, HyperParams(num_rounds=3, max_depth=2),
              ObjectiveSpec("binary-logistic", 2))
print("3-round accuracy:",
      (predict_class(small, ds.features) == ds.labels).mean())

# Trees are inspectable: every split stores its feature, threshold, and
# objective gain; every leaf stores its weight.
first = model.trees[0][0]
print("first tree: nodes=%d leaves=%d root=(f%d < %.3f, gain %.3f)" % (
    first.n_nodes, first.n_leaves,
    first.feature[0], first.threshold[0], first.gain[0],
))
