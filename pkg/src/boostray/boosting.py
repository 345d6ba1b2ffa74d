"""Additive tree-ensemble training, prediction, and model persistence.

Leaf weights are stored unscaled; the learning rate is applied when
margins accumulate, both during training and at prediction time, with
the same per-round addition order so that predicting on the training
matrix reproduces the internally accumulated margins bit for bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .data import Dataset
from .errors import ConfigError, FormatError, ShapeError
from .objectives import (
    BINARY_LOGISTIC,
    HESS_FLOOR,
    SOFTMAX,
    ObjectiveSpec,
    logistic_loss,
    sigmoid,
    softmax_loss,
    softmax_probs,
)
from .tree import LEAF, RegressionTree, TreeGrower

MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True)
class HyperParams:
    """Boosting hyperparameters; defaults follow the reference configuration
    (100 exact-greedy trees, learning rate 0.44, gamma 0, depth 6)."""

    num_rounds: int = 100
    eta: float = 0.44
    gamma: float = 0.0
    lambda_: float = 1.0
    max_depth: int = 6
    min_child_weight: float = 1.0
    min_gain_eps: float = 1e-12

    def __post_init__(self):
        if self.num_rounds < 1:
            raise ConfigError(f"num_rounds must be >= 1, got {self.num_rounds}")
        if not 0.0 < self.eta <= 1.0:
            raise ConfigError(f"eta must be in (0, 1], got {self.eta}")
        if self.gamma < 0.0:
            raise ConfigError(f"gamma must be >= 0, got {self.gamma}")
        if self.lambda_ < 0.0:
            raise ConfigError(f"lambda must be >= 0, got {self.lambda_}")
        if self.max_depth < 1:
            raise ConfigError(f"max_depth must be >= 1, got {self.max_depth}")
        if self.min_child_weight < 0.0:
            raise ConfigError(
                f"min_child_weight must be >= 0, got {self.min_child_weight}"
            )
        if self.min_gain_eps <= 0.0:
            raise ConfigError(f"min_gain_eps must be > 0, got {self.min_gain_eps}")


@dataclass(frozen=True)
class BoostModel:
    """A trained ensemble: ``trees[round][k]`` holds the k-th group tree.

    group_size is 1 for binary-logistic and n_classes for softmax.  The
    length of ``trees`` is the number of rounds actually applied, which
    equals ``params.num_rounds`` for models produced by :func:`train`.
    """

    objective: ObjectiveSpec
    params: HyperParams
    base_margin: float
    n_features: int
    class_names: tuple[str, ...]
    trees: tuple[tuple[RegressionTree, ...], ...]

    def __post_init__(self):
        group = self.objective.group_size
        for round_trees in self.trees:
            if len(round_trees) != group:
                raise ShapeError(
                    f"each round must hold {group} trees, got {len(round_trees)}"
                )
            for tree in round_trees:
                tree.validate(self.n_features, self.params.max_depth)
        if len(self.class_names) != self.objective.n_classes:
            raise ShapeError(
                f"{len(self.class_names)} class names for "
                f"{self.objective.n_classes}-class objective"
            )

    @property
    def n_trees(self) -> int:
        return sum(len(r) for r in self.trees)


def _check_features(model: BoostModel, features: np.ndarray) -> np.ndarray:
    X = np.asarray(features)
    if X.ndim != 2:
        raise ShapeError(f"features must be 2-D, got {X.ndim}-D")
    if X.shape[1] != model.n_features:
        raise ShapeError(
            f"model expects {model.n_features} features, data has {X.shape[1]}"
        )
    return X


def _batch_grad_hess(objective: ObjectiveSpec, labels: np.ndarray, margins: np.ndarray):
    """Vectorized per-row gradients/hessians, one column per group tree."""
    if objective.kind == BINARY_LOGISTIC:
        p = sigmoid(margins[:, 0])
        g = p - labels
        h = np.maximum(p * (1.0 - p), HESS_FLOOR)
        return g[:, None], h[:, None]
    p = softmax_probs(margins)
    g = p.copy()
    g[np.arange(labels.shape[0]), labels] -= 1.0
    h = np.maximum(p * (1.0 - p), HESS_FLOOR)
    return g, h


def _data_loss(objective: ObjectiveSpec, labels: np.ndarray, margins: np.ndarray):
    if objective.kind == BINARY_LOGISTIC:
        return logistic_loss(labels, margins[:, 0])
    return softmax_loss(labels, margins)


def _tree_penalty(tree: RegressionTree, eta: float, gamma: float, lambda_: float):
    """Complexity charge of one tree as applied: gamma per leaf plus the
    squared-weight penalty on the eta-scaled leaf scores."""
    leaves = tree.weight[tree.feature == LEAF]
    return gamma * leaves.size + 0.5 * lambda_ * float(np.sum((eta * leaves) ** 2))


def _train(dataset: Dataset, params: HyperParams, objective: ObjectiveSpec):
    """Full training loop; returns (model, final margins, objective history).

    The history records the regularized training objective (data loss plus
    accumulated complexity penalties) after each round.
    """
    if objective.n_classes != dataset.n_classes:
        raise ConfigError(
            f"objective expects {objective.n_classes} classes, "
            f"dataset has {dataset.n_classes}"
        )
    group = objective.group_size
    n = dataset.n_rows
    labels = dataset.labels.astype(np.int64)
    grower = TreeGrower(dataset.features)
    row_set = np.arange(n, dtype=np.int64)

    base_margin = 0.0
    margins = np.full((n, group), base_margin, dtype=np.float64)
    rounds: list[tuple[RegressionTree, ...]] = []
    penalty = 0.0
    history: list[float] = []
    for _ in range(params.num_rounds):
        g, h = _batch_grad_hess(objective, labels, margins)
        round_trees = []
        for k in range(group):
            tree, score = grower.grow(row_set, g[:, k], h[:, k], params)
            round_trees.append(tree)
            margins[:, k] += params.eta * score
            penalty += _tree_penalty(tree, params.eta, params.gamma, params.lambda_)
        rounds.append(tuple(round_trees))
        history.append(_data_loss(objective, labels, margins) + penalty)

    model = BoostModel(
        objective=objective,
        params=params,
        base_margin=base_margin,
        n_features=dataset.n_cols,
        class_names=dataset.class_names,
        trees=tuple(rounds),
    )
    return model, margins, history


def train(dataset: Dataset, params: HyperParams, objective: ObjectiveSpec) -> BoostModel:
    """Train a boosted ensemble on the dataset."""
    model, _, _ = _train(dataset, params, objective)
    return model


def predict_margin(model: BoostModel, features) -> np.ndarray:
    """Raw additive scores, shape (n_rows, group_size)."""
    X = _check_features(model, features)
    margins = np.full(
        (X.shape[0], model.objective.group_size), model.base_margin, dtype=np.float64
    )
    for round_trees in model.trees:
        for k, tree in enumerate(round_trees):
            margins[:, k] += model.params.eta * tree.predict(X)
    return margins


def predict_proba(model: BoostModel, features) -> np.ndarray:
    """Class probabilities, shape (n_rows, n_classes); rows sum to 1."""
    margins = predict_margin(model, features)
    if model.objective.kind == BINARY_LOGISTIC:
        p = sigmoid(margins[:, 0])
        return np.column_stack([1.0 - p, p])
    return softmax_probs(margins)


def predict_class(model: BoostModel, features) -> np.ndarray:
    """Most probable class per row; exact binary ties resolve to class 0."""
    return np.argmax(predict_proba(model, features), axis=1).astype(np.int32)


# ---------------------------------------------------------------------------
# Model persistence
# ---------------------------------------------------------------------------

def _tree_to_nodes(tree: RegressionTree) -> dict:
    nodes = []
    for i in range(tree.n_nodes):
        nodes.append({
            "feature": int(tree.feature[i]),
            "threshold": float(tree.threshold[i]),
            "left": int(tree.left[i]),
            "right": int(tree.right[i]),
            "weight": float(tree.weight[i]),
            "gain": float(tree.gain[i]),
        })
    return {"nodes": nodes}


def _tree_from_nodes(doc: dict) -> RegressionTree:
    try:
        nodes = doc["nodes"]
    except (KeyError, TypeError):
        raise FormatError("tree record is missing its 'nodes' array") from None
    if not nodes:
        raise FormatError("tree has an empty node array")
    fields = {name: [] for name in ("feature", "threshold", "left", "right",
                                    "weight", "gain")}
    for node in nodes:
        for name in fields:
            if name not in node:
                raise FormatError(f"tree node is missing field {name!r}")
            fields[name].append(node[name])
    return RegressionTree(
        feature=np.array(fields["feature"], dtype=np.int32),
        threshold=np.array(fields["threshold"], dtype=np.float64),
        left=np.array(fields["left"], dtype=np.int32),
        right=np.array(fields["right"], dtype=np.int32),
        weight=np.array(fields["weight"], dtype=np.float64),
        gain=np.array(fields["gain"], dtype=np.float64),
    )


def model_to_json(model: BoostModel) -> str:
    """Canonical JSON text: fixed key order, shortest round-trip floats."""
    doc = {
        "format_version": MODEL_FORMAT_VERSION,
        "objective": {
            "kind": model.objective.kind,
            "n_classes": model.objective.n_classes,
        },
        "params": {
            "num_rounds": model.params.num_rounds,
            "eta": model.params.eta,
            "gamma": model.params.gamma,
            "lambda": model.params.lambda_,
            "max_depth": model.params.max_depth,
            "min_child_weight": model.params.min_child_weight,
        },
        "base_margin": model.base_margin,
        "n_features": model.n_features,
        "class_names": list(model.class_names),
        "trees": [[_tree_to_nodes(t) for t in r] for r in model.trees],
    }
    return json.dumps(doc, separators=(",", ":"), allow_nan=False)


def save_model(model: BoostModel, path) -> None:
    Path(path).write_text(model_to_json(model) + "\n", encoding="utf-8")


def load_model(path) -> BoostModel:
    """Load and structurally validate a model file."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid model JSON ({exc.msg})") from None
    if not isinstance(doc, dict):
        raise FormatError(f"{path}: model document must be a JSON object")
    version = doc.get("format_version")
    if version != MODEL_FORMAT_VERSION:
        raise FormatError(
            f"{path}: format_version {version!r}, expected {MODEL_FORMAT_VERSION}"
        )
    try:
        objective = ObjectiveSpec(
            kind=doc["objective"]["kind"], n_classes=doc["objective"]["n_classes"]
        )
        p = doc["params"]
        params = HyperParams(
            num_rounds=p["num_rounds"],
            eta=p["eta"],
            gamma=p["gamma"],
            lambda_=p["lambda"],
            max_depth=p["max_depth"],
            min_child_weight=p["min_child_weight"],
        )
        base_margin = float(doc["base_margin"])
        n_features = int(doc["n_features"])
        class_names = tuple(doc["class_names"])
        raw_trees = doc["trees"]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"{path}: malformed model document ({exc})") from None
    trees = tuple(
        tuple(_tree_from_nodes(t) for t in round_trees) for round_trees in raw_trees
    )
    return BoostModel(
        objective=objective,
        params=params,
        base_margin=base_margin,
        n_features=n_features,
        class_names=class_names,
        trees=trees,
    )
