"""Loss objectives: probabilities, gradients, and diagonal hessians.

Both objectives expose per-row first and second derivatives of the loss
with respect to the raw margin, which is what the tree builder consumes.
Hessians are floored at 1e-16 so leaf-weight denominators stay positive
even at saturated probabilities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

HESS_FLOOR = 1e-16

BINARY_LOGISTIC = "binary-logistic"
SOFTMAX = "softmax"


@dataclass(frozen=True)
class ObjectiveSpec:
    """Which link/loss to train with, and how many classes it covers."""

    kind: str
    n_classes: int

    def __post_init__(self):
        if self.kind == BINARY_LOGISTIC:
            if self.n_classes != 2:
                raise ConfigError(
                    f"binary-logistic requires n_classes=2, got {self.n_classes}"
                )
        elif self.kind == SOFTMAX:
            if self.n_classes < 3:
                raise ConfigError(
                    f"softmax requires n_classes >= 3, got {self.n_classes}"
                )
        else:
            raise ConfigError(f"unknown objective kind {self.kind!r}")

    @property
    def group_size(self) -> int:
        """Trees built per boosting round: 1 for binary, one per class for softmax."""
        return 1 if self.kind == BINARY_LOGISTIC else self.n_classes


def sigmoid(margin):
    """Numerically stable logistic link, elementwise."""
    m = np.asarray(margin, dtype=np.float64)
    z = np.exp(-np.abs(m))
    return np.where(m >= 0, 1.0 / (1.0 + z), z / (1.0 + z))


def softmax_probs(margins: np.ndarray) -> np.ndarray:
    """Row-wise softmax with max-subtraction for stability."""
    m = np.asarray(margins, dtype=np.float64)
    shifted = m - m.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def grad_hess_logistic(label, margin):
    """Gradient and hessian of the log loss at the given margin.

    With p = sigmoid(margin): g = p - label, h = max(p * (1 - p), 1e-16).
    Accepts scalars or aligned arrays.
    """
    y = np.asarray(label, dtype=np.float64)
    p = sigmoid(margin)
    g = p - y
    h = np.maximum(p * (1.0 - p), HESS_FLOOR)
    if np.isscalar(label) or (g.ndim == 0):
        return float(g), float(h)
    return g, h


def grad_hess_softmax(label: int, margins: np.ndarray):
    """Gradient and diagonal hessian of cross-entropy for one row.

    With p = softmax(margins): g_k = p_k - [label == k],
    h_k = max(p_k * (1 - p_k), 1e-16).
    """
    p = softmax_probs(np.asarray(margins, dtype=np.float64))
    g = p.copy()
    g[label] -= 1.0
    h = np.maximum(p * (1.0 - p), HESS_FLOOR)
    return g, h


def logistic_loss(labels: np.ndarray, margins: np.ndarray) -> float:
    """Total binary log loss, computed without forming unstable exponents."""
    y = np.asarray(labels, dtype=np.float64)
    m = np.asarray(margins, dtype=np.float64)
    # -[y log p + (1-y) log(1-p)] = log(1 + exp(-m)) + (1-y) m
    return float(np.sum(np.logaddexp(0.0, -m) + (1.0 - y) * m))


def softmax_loss(labels: np.ndarray, margins: np.ndarray) -> float:
    """Total multiclass cross-entropy: logsumexp(margins) - margin[label]."""
    m = np.asarray(margins, dtype=np.float64)
    peak = m.max(axis=1)
    lse = peak + np.log(np.exp(m - peak[:, None]).sum(axis=1))
    picked = m[np.arange(m.shape[0]), np.asarray(labels, dtype=np.int64)]
    return float(np.sum(lse - picked))
