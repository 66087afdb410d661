"""Gradient-descent learners that minimize the min(FP,FN) area.

Two optimizers share the same loop: direct descent on the n-vector of
predicted values, and descent on the weight vector of a linear model.  Both
pick the step size by grid line search on the training objective (the zero
step is always a candidate, so the recorded objective never increases), apply
an intercept found by a linear scan over thresholds (it changes the recorded
error rate, never the loss), and stop after two consecutive zero steps or at
the iteration cap.  The linear learner additionally records per-iteration
validation metrics and supports early stopping on them.
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Real

import numpy as np

from .baselines import pairwise_squared_hinge, weighted_logistic
from .error_model import ExampleSet, ValidationError, require_valid, _constant_intervals, _pick_widest
from .loss import aum_only, compute_aum, descent_direction, _sweep
from .roc import auc, roc_curve

__all__ = [
    "DEFAULT_STEP_GRID",
    "TrainConfig",
    "IterationRecord",
    "FitResult",
    "best_intercept",
    "optimize_predictions",
    "optimize_linear",
    "select_iteration",
]

DEFAULT_STEP_GRID = (0.0, 1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0)


@dataclass(frozen=True)
class TrainConfig:
    """Knobs shared by both optimizers.

    ``step_grid`` must contain 0; when left as None the default decade grid is
    used and refined once around the best step by factor-2 neighbors.
    ``init_mode`` is one of zero / min_error / provided, with ``init`` holding
    the vector for the provided mode.  ``seed`` is reserved for randomized
    tie-breaks; the current implementation is fully deterministic.
    """

    variant: str = "count"
    max_iterations: int = 100
    step_grid: tuple[float, ...] | None = None
    init_mode: str = "zero"
    init: np.ndarray | None = None
    seed: int = 0
    record_trace: bool = True

    def __post_init__(self):
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be non-negative")
        if self.step_grid is not None:
            grid = tuple(float(a) for a in self.step_grid)
            if not grid or 0.0 not in grid:
                raise ValueError("step_grid must contain 0")
            if any(a < 0 or not np.isfinite(a) for a in grid):
                raise ValueError("step_grid entries must be finite and non-negative")
            object.__setattr__(self, "step_grid", tuple(sorted(set(grid))))
        if self.init_mode not in ("zero", "min_error", "provided"):
            raise ValueError(f"unknown init_mode {self.init_mode!r}")
        if self.init_mode == "provided" and self.init is None:
            raise ValueError("init_mode 'provided' needs an init vector")


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    aum: float
    auc: float
    error_rate: float
    step: float
    intercept: float
    val_aum: float | None = None
    val_auc: float | None = None


@dataclass(frozen=True)
class FitResult:
    """Per-iteration trace plus the parameters at the selected iteration."""

    trace: tuple[IterationRecord, ...]
    selected_iteration: int
    selection_rule: str
    predictions: np.ndarray | None = None
    weights: np.ndarray | None = None
    intercept: float = 0.0
    final_predictions: np.ndarray | None = None
    final_weights: np.ndarray | None = None
    final_intercept: float = 0.0


def best_intercept(example_set: ExampleSet, predictions) -> tuple[float, int]:
    """Constant shift minimizing the total error count, and that minimum.

    The total error is piecewise constant in the shift, so a linear scan over
    the sorted thresholds finds every level; among maximal optimal intervals
    the widest wins and its representative point is returned (midpoint, or one
    unit inside a single finite endpoint).
    """
    require_valid(example_set)
    predictions = np.asarray(predictions, dtype=np.float64)
    table = _sweep(example_set, predictions)
    new_group = np.empty(len(table), dtype=bool)
    new_group[0] = True
    new_group[1:] = table.threshold[1:] != table.threshold[:-1]
    last = np.append(np.flatnonzero(new_group)[1:] - 1, len(table) - 1)
    taus = table.threshold[new_group]
    errors = np.concatenate(
        (
            [table.fp_before[0] + table.fn_before[0]],
            table.fp_after[last] + table.fn_after[last],
        )
    )
    beta = _pick_widest(_constant_intervals(taus, errors))
    return beta, int(errors.min())


def _line_search(evaluate, grid, current_value, refine):
    """Smallest step achieving the smallest objective over the grid.

    With ``refine`` the best positive step's factor-2 neighbors are also
    tried.  Ties always resolve toward the smaller step, so a step that fails
    to strictly improve on the zero step is never taken.
    """
    seen = {0.0: current_value}
    for alpha in grid:
        if alpha != 0.0:
            seen[alpha] = evaluate(alpha)
    best_alpha = min(seen, key=lambda a: (seen[a], a))
    if refine and best_alpha > 0.0:
        for alpha in (best_alpha / 2.0, best_alpha * 2.0):
            if alpha not in seen:
                seen[alpha] = evaluate(alpha)
        best_alpha = min(seen, key=lambda a: (seen[a], a))
    return best_alpha, seen[best_alpha]


def _grid_and_refine(config: TrainConfig):
    if config.step_grid is None:
        return DEFAULT_STEP_GRID, True
    return config.step_grid, False


def _error_rate(example_set: ExampleSet, errors: int) -> float:
    return errors / (example_set.total_fpp + example_set.total_fnp)


def _init_predictions(example_set: ExampleSet, config: TrainConfig) -> np.ndarray:
    from .error_model import min_error_prediction

    if config.init_mode == "zero":
        return np.zeros(example_set.n)
    if config.init_mode == "min_error":
        return np.array([min_error_prediction(e) for e in example_set.examples])
    init = np.asarray(config.init, dtype=np.float64)
    if init.shape != (example_set.n,):
        raise ValueError(f"init vector must have shape ({example_set.n},)")
    return init.copy()


def optimize_predictions(example_set: ExampleSet, config: TrainConfig) -> FitResult:
    """Descend the loss directly on the vector of predicted values."""
    require_valid(example_set)
    if example_set.total_fpp < 1 or example_set.total_fnp < 1:
        raise ValidationError(["optimization needs both error capacities positive"])
    grid, refine = _grid_and_refine(config)
    y = _init_predictions(example_set, config)

    beta0, errs0 = best_intercept(example_set, y)
    records = [
        IterationRecord(
            iteration=0,
            aum=aum_only(example_set, y, config.variant),
            auc=auc(roc_curve(example_set, y)),
            error_rate=_error_rate(example_set, errs0),
            step=0.0,
            intercept=beta0,
        )
    ]
    history = [y.copy()]
    stalls = 0
    moved = False
    for _ in range(config.max_iterations):
        result = compute_aum(example_set, y, config.variant)
        direction = descent_direction(result.derivs)
        if not direction.any():
            break
        alpha, value = _line_search(
            lambda a: aum_only(example_set, y - a * direction, config.variant),
            grid,
            result.aum,
            refine,
        )
        if alpha == 0.0:
            stalls += 1
            if stalls >= 2:
                break
            continue
        stalls = 0
        y = y - alpha * direction
        beta, errs = best_intercept(example_set, y)
        y = y + beta
        moved = True
        if config.record_trace:
            records.append(
                IterationRecord(
                    iteration=len(records),
                    aum=value,
                    auc=auc(roc_curve(example_set, y)),
                    error_rate=_error_rate(example_set, errs),
                    step=alpha,
                    intercept=beta,
                )
            )
            history.append(y.copy())

    if not config.record_trace and moved:
        # Only the initial and final states are kept in this mode.
        beta, errs = best_intercept(example_set, y)
        records.append(
            IterationRecord(
                iteration=len(records),
                aum=aum_only(example_set, y, config.variant),
                auc=auc(roc_curve(example_set, y)),
                error_rate=_error_rate(example_set, errs),
                step=float("nan"),
                intercept=beta,
            )
        )
        history.append(y.copy())
    trace = tuple(records)
    selected = select_iteration(trace, rule="min_aum")
    return FitResult(
        trace=trace,
        selected_iteration=selected,
        selection_rule="min_aum",
        predictions=history[selected],
        intercept=trace[selected].intercept,
        final_predictions=y,
        final_intercept=trace[-1].intercept,
    )


def _binary_labels_of(example_set: ExampleSet) -> np.ndarray:
    """Recover +-1 labels from a binary-style set, for the baseline losses."""
    labels = np.empty(example_set.n, dtype=np.int64)
    for i, ex in enumerate(example_set.examples):
        if ex.fnp > 0 and ex.fpp == 0:
            labels[i] = 1
        elif ex.fpp > 0 and ex.fnp == 0:
            labels[i] = -1
        else:
            raise ValueError(
                "baseline objectives need binary-label examples "
                "(each with exactly one of fpp/fnp positive)"
            )
    return labels


def optimize_linear(
    features,
    example_set: ExampleSet,
    config: TrainConfig,
    validation: tuple | None = None,
    objective: str = "aum",
    selection_rule: str = "min_aum",
) -> FitResult:
    """Descend on a linear model's weight vector.

    The prediction-space gradient is pulled back through the feature matrix;
    the step is chosen by grid line search on the training objective.  With
    ``validation=(features, example_set)`` per-iteration validation metrics are
    recorded and ``selection_rule`` (min_aum / max_auc / initial) picks the
    returned iterate from them; without validation the rule applies to the
    training trace.
    """
    require_valid(example_set)
    X = np.asarray(features, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] != example_set.n:
        raise ValueError(
            f"features must be 2-D with {example_set.n} rows, got {X.shape}"
        )
    if example_set.total_fpp < 1 or example_set.total_fnp < 1:
        raise ValidationError(["optimization needs both error capacities positive"])
    grid, refine = _grid_and_refine(config)

    if objective == "aum":
        labels = None
    elif objective in ("logistic", "pairs"):
        labels = _binary_labels_of(example_set)
    else:
        raise ValueError(f"unknown objective {objective!r}")

    X_val = set_val = None
    if validation is not None:
        X_val, set_val = validation
        X_val = np.asarray(X_val, dtype=np.float64)
        require_valid(set_val)
        if X_val.ndim != 2 or X_val.shape[0] != set_val.n or X_val.shape[1] != X.shape[1]:
            raise ValueError("validation features do not match")

    def objective_at(pred: np.ndarray) -> float:
        if objective == "aum":
            return aum_only(example_set, pred, config.variant)
        if objective == "logistic":
            return weighted_logistic(labels, pred)[0]
        return pairwise_squared_hinge(labels, pred)[0]

    def gradient_at(pred: np.ndarray, beta: float) -> np.ndarray:
        if objective == "aum":
            result = compute_aum(example_set, pred + beta, config.variant)
            return descent_direction(result.derivs)
        if objective == "logistic":
            return weighted_logistic(labels, pred)[1]
        return pairwise_squared_hinge(labels, pred)[1]

    if config.init_mode == "zero":
        w = np.zeros(X.shape[1])
    elif config.init_mode == "provided":
        w = np.asarray(config.init, dtype=np.float64).copy()
        if w.shape != (X.shape[1],):
            raise ValueError(f"init weights must have shape ({X.shape[1]},)")
    else:
        # Least-squares fit to the per-example minimum-error predictions.
        # A zero start puts every prediction at one tied threshold, where the
        # loss is already zero and the line search cannot move; this start is
        # cheap and never degenerate on separable data.
        from .error_model import min_error_prediction

        targets = np.array([min_error_prediction(e) for e in example_set.examples])
        w = np.linalg.lstsq(X, targets, rcond=None)[0]

    def snapshot(j, step, w_now, objective_value=None):
        pred = X @ w_now
        beta, errs = best_intercept(example_set, pred)
        rec = {
            "iteration": j,
            "aum": aum_only(example_set, pred, config.variant),
            "auc": auc(roc_curve(example_set, pred)),
            "error_rate": _error_rate(example_set, errs),
            "step": step,
            "intercept": beta,
        }
        if set_val is not None:
            val_pred = X_val @ w_now
            rec["val_aum"] = aum_only(set_val, val_pred, config.variant)
            rec["val_auc"] = auc(roc_curve(set_val, val_pred))
        return IterationRecord(**rec), beta

    rec0, _ = snapshot(0, 0.0, w)
    records = [rec0]
    history = [w.copy()]
    stalls = 0
    moved = False
    for _ in range(config.max_iterations):
        pred = X @ w
        beta, _ = best_intercept(example_set, pred)
        grad_pred = gradient_at(pred, beta)
        g = X.T @ grad_pred
        if not g.any():
            break
        current = objective_at(pred)
        alpha, _ = _line_search(
            lambda a: objective_at(X @ (w - a * g)), grid, current, refine
        )
        if alpha == 0.0:
            stalls += 1
            if stalls >= 2:
                break
            continue
        stalls = 0
        w = w - alpha * g
        moved = True
        if config.record_trace:
            rec, _ = snapshot(len(records), alpha, w)
            records.append(rec)
            history.append(w.copy())

    if not config.record_trace and moved:
        rec, _ = snapshot(len(records), float("nan"), w)
        records.append(rec)
        history.append(w.copy())
    trace = tuple(records)
    selected = select_iteration(trace, rule=selection_rule)
    return FitResult(
        trace=trace,
        selected_iteration=selected,
        selection_rule=selection_rule,
        weights=history[selected],
        intercept=trace[selected].intercept,
        final_weights=w,
        final_intercept=trace[-1].intercept,
    )


def _metric_series(trace, rule):
    values = []
    for item in trace:
        if isinstance(item, Real):
            values.append(float(item))
        elif rule == "min_aum":
            values.append(
                float(item.val_aum) if item.val_aum is not None else float(item.aum)
            )
        else:
            values.append(
                float(item.val_auc) if item.val_auc is not None else float(item.auc)
            )
    return values


def select_iteration(trace, validation_trace=None, rule: str = "min_aum") -> int:
    """Index of the iterate chosen by the early-stopping rule.

    ``min_aum`` returns the first minimum of the (validation when available)
    loss series, ``max_auc`` the first maximum of the AUC series, ``initial``
    always 0.  Traces may be sequences of iteration records or plain numbers.
    """
    if rule == "initial":
        return 0
    if rule not in ("min_aum", "max_auc"):
        raise ValueError(f"unknown selection rule {rule!r}")
    series = _metric_series(
        trace if validation_trace is None else validation_trace, rule
    )
    if not series:
        return 0
    if rule == "min_aum":
        return int(np.argmin(series))
    return int(np.argmax(series))
