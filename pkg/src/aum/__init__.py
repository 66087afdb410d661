"""ROC curve optimization via the area under min(FP, FN).

Exact ROC/AUC computation over piecewise-constant error functions, a
sort-based loss and directional-derivative algorithm, gradient-descent
learners that raise AUC by driving the loss down, and brute-force oracles
that everything is validated against.
"""

from .baselines import pairwise_squared_hinge, weighted_logistic
from .error_model import (
    Breakpoint,
    ErrorFunction,
    ExampleSet,
    ValidationError,
    evaluate,
    from_binary_labels,
    min_error_prediction,
    require_valid,
    validate,
)
from .estimators import AumLinearClassifier
from .loss import (
    AumResult,
    ThresholdTable,
    aum_only,
    compute_aum,
    descent_direction,
    is_differentiable,
    mean_gradient,
)
from .optim import (
    DEFAULT_STEP_GRID,
    FitResult,
    IterationRecord,
    TrainConfig,
    best_intercept,
    optimize_linear,
    optimize_predictions,
    select_iteration,
)
from .roc import RocCurve, auc, roc_curve, sm, total_errors

__version__ = "0.1.0"

__all__ = [
    "Breakpoint",
    "ErrorFunction",
    "ExampleSet",
    "ValidationError",
    "evaluate",
    "from_binary_labels",
    "min_error_prediction",
    "require_valid",
    "validate",
    "RocCurve",
    "auc",
    "roc_curve",
    "sm",
    "total_errors",
    "AumResult",
    "ThresholdTable",
    "aum_only",
    "compute_aum",
    "descent_direction",
    "is_differentiable",
    "mean_gradient",
    "DEFAULT_STEP_GRID",
    "FitResult",
    "IterationRecord",
    "TrainConfig",
    "best_intercept",
    "optimize_linear",
    "optimize_predictions",
    "select_iteration",
    "weighted_logistic",
    "pairwise_squared_hinge",
    "AumLinearClassifier",
    "__version__",
]
