"""Scikit-learn style estimator wrapping the linear learner.

The estimator keeps the usual surface (``fit`` / ``decision_function`` /
``predict`` / ``get_params``) so the learner composes with pipelines, grid
search, and cross-validation utilities.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .error_model import from_binary_labels
from .optim import TrainConfig, optimize_linear

__all__ = ["AumLinearClassifier"]


class AumLinearClassifier(BaseEstimator, ClassifierMixin):
    """Binary linear classifier trained by descending the min(FP,FN) area.

    Parameters
    ----------
    variant : "count" or "rate"
        Whether the loss minimizes raw error counts or capacity-normalized
        rates; counts are the default and usually the more accurate choice
        under class imbalance.
    objective : "aum", "logistic" or "pairs"
        Training objective; the latter two are the comparison baselines.
    max_iterations : int
        Cap on gradient-descent iterations.
    step_grid : sequence of float or None
        Line-search candidates (must include 0); None uses the default
        decade grid with one factor-2 refinement.
    validation_fraction : float
        Held-out share of the training data used for early stopping; 0
        disables the split and selection happens on the training trace.
    selection : "min_aum", "max_auc" or "initial"
        Early-stopping rule applied to the (validation) trace.
    init : "min_error" or "zero"
        Weight initialization; min_error fits least squares to the
        per-example minimum-error predictions, which avoids the degenerate
        all-tied start that a zero vector produces on binary data.
    random_state : int
        Seed for the validation split.
    """

    def __init__(
        self,
        variant="count",
        objective="aum",
        max_iterations=100,
        step_grid=None,
        validation_fraction=0.0,
        selection="min_aum",
        init="min_error",
        random_state=0,
    ):
        self.variant = variant
        self.objective = objective
        self.max_iterations = max_iterations
        self.step_grid = step_grid
        self.validation_fraction = validation_fraction
        self.selection = selection
        self.init = init
        self.random_state = random_state

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=np.float64)
        self.classes_ = np.unique(y)
        if len(self.classes_) != 2:
            raise ValueError("expected exactly two classes")
        signed = np.where(y == self.classes_[1], 1, -1)

        config = TrainConfig(
            variant=self.variant,
            max_iterations=self.max_iterations,
            step_grid=tuple(self.step_grid) if self.step_grid is not None else None,
            init_mode=self.init,
        )
        validation = None
        if self.validation_fraction > 0.0:
            rng = np.random.default_rng(self.random_state)
            order = rng.permutation(len(signed))
            n_val = max(1, int(round(self.validation_fraction * len(signed))))
            val_idx, train_idx = order[:n_val], order[n_val:]
            if len(np.unique(signed[train_idx])) < 2 or len(np.unique(signed[val_idx])) < 2:
                raise ValueError("validation split left a single-class subset")
            validation = (X[val_idx], from_binary_labels(signed[val_idx]))
            X_train, y_train = X[train_idx], signed[train_idx]
        else:
            X_train, y_train = X, signed

        self.fit_result_ = optimize_linear(
            X_train,
            from_binary_labels(y_train),
            config,
            validation=validation,
            objective=self.objective,
            selection_rule=self.selection,
        )
        self.coef_ = self.fit_result_.weights
        self.intercept_ = self.fit_result_.intercept
        self.n_features_in_ = X.shape[1]
        return self

    def decision_function(self, X):
        check_is_fitted(self, "coef_")
        X = check_array(X, dtype=np.float64)
        return X @ self.coef_ + self.intercept_

    def predict(self, X):
        scores = self.decision_function(X)
        return np.where(scores >= 0.0, self.classes_[1], self.classes_[0])
