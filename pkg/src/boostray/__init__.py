"""Second-order gradient tree boosting on dense feature matrices.

The package trains regularized boosted-tree classifiers with exact greedy
split finding on CNN-extracted feature matrices, and evaluates them with
stratified cross-validation or holdout splits and a confusion-matrix
metric suite.
"""

from .boosting import (
    BoostModel,
    HyperParams,
    load_model,
    model_to_json,
    predict_class,
    predict_margin,
    predict_proba,
    save_model,
    train,
)
from .data import (
    DEFAULT_SEED,
    Dataset,
    SplitPlan,
    load_csv,
    load_fmx,
    stratified_holdout,
    stratified_kfold,
    validate_features,
    write_csv,
    write_fmx,
)
from .errors import (
    BoostrayError,
    ConfigError,
    DataError,
    DomainError,
    FormatError,
    ShapeError,
    StratificationError,
)
from .metrics import (
    AveragedMetrics,
    ClassMetrics,
    ConfusionMatrix,
    CvResult,
    MetricsReport,
    binary_metrics,
    confusion,
    evaluate,
    multiclass_metrics,
    run_cv,
    run_holdout,
)
from .objectives import (
    BINARY_LOGISTIC,
    SOFTMAX,
    ObjectiveSpec,
    grad_hess_logistic,
    grad_hess_softmax,
    sigmoid,
    softmax_probs,
)
from .tree import (
    LEAF,
    RegressionTree,
    build_tree,
    leaf_weight,
    presort_columns,
    split_gain,
)

__version__ = "0.1.0"

__all__ = [
    "AveragedMetrics",
    "BINARY_LOGISTIC",
    "BoostModel",
    "BoostrayError",
    "ClassMetrics",
    "ConfigError",
    "ConfusionMatrix",
    "CvResult",
    "DEFAULT_SEED",
    "DataError",
    "Dataset",
    "DomainError",
    "FormatError",
    "HyperParams",
    "LEAF",
    "MetricsReport",
    "ObjectiveSpec",
    "RegressionTree",
    "SOFTMAX",
    "ShapeError",
    "SplitPlan",
    "StratificationError",
    "binary_metrics",
    "build_tree",
    "confusion",
    "evaluate",
    "grad_hess_logistic",
    "grad_hess_softmax",
    "leaf_weight",
    "load_csv",
    "load_fmx",
    "load_model",
    "model_to_json",
    "multiclass_metrics",
    "predict_class",
    "predict_margin",
    "predict_proba",
    "presort_columns",
    "run_cv",
    "run_holdout",
    "save_model",
    "sigmoid",
    "softmax_probs",
    "split_gain",
    "stratified_holdout",
    "stratified_kfold",
    "train",
    "validate_features",
    "write_csv",
    "write_fmx",
]
