import numpy as np
import pytest

from boostray import Dataset


def make_blobs(n_per_class, centers, n_cols, seed, spread=1.0, names=None):
    """Gaussian blob dataset: one isotropic cluster per class."""
    rng = np.random.default_rng(seed)
    parts, labels = [], []
    for cls, (count, center) in enumerate(zip(n_per_class, centers)):
        parts.append(rng.normal(center, spread, size=(count, n_cols)))
        labels.extend([cls] * count)
    X = np.vstack(parts).astype(np.float32)
    if names is None:
        names = tuple(f"class{i}" for i in range(len(n_per_class)))
    return Dataset(X, np.array(labels, dtype=np.int32), tuple(names))


def make_random_dataset(n_rows, n_cols, n_classes, seed, names=None):
    """Uninformative random features with every class present."""
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n_rows, n_cols)).astype(np.float32)
    labels = rng.integers(0, n_classes, n_rows).astype(np.int32)
    labels[:n_classes] = np.arange(n_classes)  # guarantee presence
    if names is None:
        names = tuple(f"class{i}" for i in range(n_classes))
    return Dataset(X, labels, tuple(names))


@pytest.fixture
def two_blob_dataset():
    """Linearly separable two-class problem (200 rows x 5 features)."""
    return make_blobs(
        (100, 100), (-3.0, 3.0), n_cols=5, seed=11, names=("covid", "normal")
    )


@pytest.fixture
def three_blob_dataset():
    """Separable three-class problem with imbalanced class sizes."""
    return make_blobs(
        (40, 80, 80), (-6.0, 0.0, 6.0), n_cols=6, seed=13, spread=0.8,
        names=("covid", "pneumonia", "normal"),
    )
