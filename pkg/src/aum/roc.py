"""ROC curves traced over all constants added to a prediction vector.

Sweeping the additive constant from minus to plus infinity visits one point
per constant interval of the total error functions.  When some per-example FP
or FN function is non-monotone the curve can move left or down, loop, and
produce a signed area outside [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .error_model import ExampleSet, ValidationError, require_valid
from .loss import _sweep

__all__ = ["RocCurve", "total_errors", "roc_curve", "auc", "sm"]


@dataclass(frozen=True)
class RocCurve:
    """Ordered ROC points, one per constant interval of the error totals.

    Point q holds the totals and rates on the interval ending at ``tau_hi[q]``;
    the last ``tau_hi`` is +inf.  The first point is (fpr, tpr) = (0, 0) and
    the last is (1, 1).  ``min_count`` is min(fpt, fnt) per point.
    """

    tau_hi: np.ndarray
    fpt: np.ndarray
    fnt: np.ndarray
    fpr: np.ndarray
    tpr: np.ndarray
    min_count: np.ndarray

    def __len__(self) -> int:
        return len(self.tau_hi)

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.fpr.tolist(), self.tpr.tolist()))


def total_errors(
    example_set: ExampleSet, predictions, c: float
) -> tuple[int, int, float, float]:
    """(FPT, FNT, FPR, TPR) at shift constant ``c``.

    FPT sums each example's FP at its shifted prediction, FNT likewise for FN;
    the rates divide by the set's total capacities.
    """
    require_valid(example_set)
    predictions = np.asarray(predictions, dtype=np.float64)
    if predictions.shape != (example_set.n,):
        raise ValueError(
            f"expected {example_set.n} predictions, got shape {predictions.shape}"
        )
    if example_set.total_fpp < 1 or example_set.total_fnp < 1:
        raise ValidationError(["FPR/TPR undefined: a total error capacity is zero"])
    arr = example_set.arrays
    shifted = predictions[arr["example_index"]] + c
    fpt = int(arr["delta_fp"][arr["value"] <= shifted].sum())
    fnt = int(-arr["delta_fn"][arr["value"] > shifted].sum())
    fpr = fpt / example_set.total_fpp
    tpr = 1.0 - fnt / example_set.total_fnp
    return fpt, fnt, fpr, tpr


def roc_curve(example_set: ExampleSet, predictions) -> RocCurve:
    """Trace the full ROC curve for one prediction vector.

    Equal thresholds across examples are merged into a single point (exact
    float equality), so consecutive ``tau_hi`` values are strictly increasing
    and the point count is minimal.
    """
    require_valid(example_set)
    predictions = np.asarray(predictions, dtype=np.float64)
    if predictions.shape != (example_set.n,):
        raise ValueError(
            f"expected {example_set.n} predictions, got shape {predictions.shape}"
        )
    tfp, tfn = example_set.total_fpp, example_set.total_fnp
    if tfp < 1 or tfn < 1:
        raise ValidationError(["ROC curve undefined: a total error capacity is zero"])
    table = _sweep(example_set, predictions)

    new_group = np.empty(len(table), dtype=bool)
    new_group[0] = True
    new_group[1:] = table.threshold[1:] != table.threshold[:-1]
    last = np.append(np.flatnonzero(new_group)[1:] - 1, len(table) - 1)
    taus = table.threshold[new_group]

    # Totals on the interval below the first threshold, then after each group.
    fpt = np.concatenate(([0], table.fp_after[last]))
    fnt = np.concatenate(([table.fn_before[0]], table.fn_after[last]))
    if fpt[-1] != tfp or fnt[0] != tfn:
        raise ValidationError(
            [
                "ROC endpoints undefined: terminal FP total or initial FN total "
                "does not match the set's capacities"
            ]
        )
    return RocCurve(
        tau_hi=np.concatenate((taus, [np.inf])),
        fpt=fpt,
        fnt=fnt,
        fpr=fpt / tfp,
        tpr=1.0 - fnt / tfn,
        min_count=np.minimum(fpt, fnt),
    )


def auc(curve: RocCurve) -> float:
    """Signed trapezoid area under the curve.

    Leftward moves contribute negative terms and loops double-count area, so
    values outside [0, 1] are possible for non-monotone error functions.
    """
    return float(np.sum(np.diff(curve.fpr) * (curve.tpr[:-1] + curve.tpr[1:]) / 2.0))


def sm(curve: RocCurve) -> float:
    """Sum of min(fpt, fnt) over the interior points of the curve.

    Thresholds are merged when the curve is built, so every interior point is
    distinct and contributes once.
    """
    return float(curve.min_count[1:-1].sum())
