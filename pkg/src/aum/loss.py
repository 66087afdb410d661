"""Area under min(FP, FN) and its directional derivatives.

The loss for a prediction vector is the integral, over all constants added to
the predictions, of the minimum of total false positives and total false
negatives.  Both the loss and the n x 2 matrix of one-sided derivatives come
out of a single pass: compute one threshold per breakpoint, sort once, then
take cumulative sums of the error deltas.  Runtime is dominated by the sort,
O(B log B) for B breakpoints.

Everything here is a pure function of immutable inputs and therefore
thread-safe; results are deterministic for a fixed input regardless of how
ties are ordered by the sort, because tied thresholds are grouped before the
cumulative totals are read.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .error_model import ExampleSet, require_valid

__all__ = [
    "ThresholdTable",
    "AumResult",
    "compute_aum",
    "aum_only",
    "mean_gradient",
    "descent_direction",
    "is_differentiable",
]


@dataclass(frozen=True)
class ThresholdTable:
    """Per-breakpoint totals in sorted threshold order.

    ``fp_before`` / ``fn_before`` are the total error counts on the constant
    interval just below the breakpoint's threshold, ``fp_after`` / ``fn_after``
    just above it.  Breakpoints sharing a threshold form one group and all
    report the same before (pre-group) and after (post-group) totals, which
    makes every downstream quantity independent of sort stability.
    """

    threshold: np.ndarray
    example_index: np.ndarray
    delta_fp: np.ndarray
    delta_fn: np.ndarray
    fp_before: np.ndarray
    fp_after: np.ndarray
    fn_before: np.ndarray
    fn_after: np.ndarray

    def __len__(self) -> int:
        return len(self.threshold)


@dataclass(frozen=True)
class AumResult:
    """Loss value plus the n x 2 directional-derivative matrix.

    ``derivs[:, 0]`` is the derivative when the example's prediction moves in
    the negative direction, ``derivs[:, 1]`` in the positive direction; the
    two columns bracket the one-sided slopes of this piecewise-linear loss.
    """

    aum: float
    derivs: np.ndarray
    variant: str
    table: ThresholdTable | None = None


def _sweep(example_set: ExampleSet, predictions: np.ndarray) -> ThresholdTable:
    """Sort thresholds and accumulate grouped before/after error totals."""
    arr = example_set.arrays
    thresholds = arr["value"] - predictions[arr["example_index"]]
    # Threshold is the sort key; example then input order only fix the
    # ordering of diagnostics output inside tied groups.
    order = np.lexsort((arr["example_index"], thresholds))
    ts = thresholds[order]
    dfp = arr["delta_fp"][order]
    dfn = arr["delta_fn"][order]
    idx = arr["example_index"][order]

    new_group = np.empty(len(ts), dtype=bool)
    new_group[0] = True
    new_group[1:] = ts[1:] != ts[:-1]
    starts = np.flatnonzero(new_group)
    group_id = np.cumsum(new_group) - 1

    grp_fp = np.add.reduceat(dfp, starts)
    grp_neg_fn = np.add.reduceat(-dfn, starts)
    fp_after_g = np.cumsum(grp_fp)
    fp_before_g = fp_after_g - grp_fp
    cum_neg_fn = np.cumsum(grp_neg_fn)
    total_neg_fn = cum_neg_fn[-1]
    fn_after_g = total_neg_fn - cum_neg_fn
    fn_before_g = fn_after_g + grp_neg_fn

    return ThresholdTable(
        threshold=ts,
        example_index=idx,
        delta_fp=dfp,
        delta_fn=dfn,
        fp_before=fp_before_g[group_id],
        fp_after=fp_after_g[group_id],
        fn_before=fn_before_g[group_id],
        fn_after=fn_after_g[group_id],
    )


def _rate_scales(example_set: ExampleSet, variant: str) -> tuple[float, float]:
    if variant == "count":
        return 1.0, 1.0
    if variant == "rate":
        if example_set.total_fpp < 1 or example_set.total_fnp < 1:
            raise ValueError(
                "rate variant needs at least one possible FP and one possible FN"
            )
        return 1.0 / example_set.total_fpp, 1.0 / example_set.total_fnp
    raise ValueError(f"unknown variant {variant!r}")


def _area(table: ThresholdTable, sfp: float, sfn: float) -> float:
    # min of the totals on the interval below each breakpoint, times its
    # width; widths inside a tied group are zero, so grouping is harmless.
    m_below = np.minimum(table.fp_before * sfp, table.fn_before * sfn)
    widths = np.diff(table.threshold)
    return float((widths * m_below[1:]).sum())


def _check_inputs(example_set: ExampleSet, predictions) -> np.ndarray:
    require_valid(example_set)
    predictions = np.asarray(predictions, dtype=np.float64)
    if predictions.shape != (example_set.n,):
        raise ValueError(
            f"expected {example_set.n} predictions, got shape {predictions.shape}"
        )
    return predictions


def compute_aum(
    example_set: ExampleSet,
    predictions,
    variant: str = "count",
    with_table: bool = False,
) -> AumResult:
    """Loss and directional-derivative matrix for one prediction vector.

    With ``variant="rate"`` the FP totals are divided by the set's total FP
    capacity and the FN totals by its FN capacity inside every min, which
    scales the loss and all slopes consistently.  Counts stay exact integers
    until the final multiply.
    """
    predictions = _check_inputs(example_set, predictions)
    sfp, sfn = _rate_scales(example_set, variant)
    table = _sweep(example_set, predictions)
    area = _area(table, sfp, sfn)

    # One-sided derivative of each breakpoint: compare the min with and
    # without this breakpoint's own deltas applied, on the relevant side.
    lo = np.minimum(
        (table.fp_after - table.delta_fp) * sfp,
        (table.fn_after - table.delta_fn) * sfn,
    ) - np.minimum(table.fp_after * sfp, table.fn_after * sfn)
    hi = np.minimum(
        (table.fp_before + table.delta_fp) * sfp,
        (table.fn_before + table.delta_fn) * sfn,
    ) - np.minimum(table.fp_before * sfp, table.fn_before * sfn)
    n = example_set.n
    derivs = np.column_stack(
        (
            np.bincount(table.example_index, weights=lo, minlength=n),
            np.bincount(table.example_index, weights=hi, minlength=n),
        )
    )
    return AumResult(
        aum=area,
        derivs=derivs,
        variant=variant,
        table=table if with_table else None,
    )


def aum_only(example_set: ExampleSet, predictions, variant: str = "count") -> float:
    """Loss value alone, skipping the derivative pass."""
    predictions = _check_inputs(example_set, predictions)
    sfp, sfn = _rate_scales(example_set, variant)
    return _area(_sweep(example_set, predictions), sfp, sfn)


def mean_gradient(derivs: np.ndarray) -> np.ndarray:
    """Arithmetic mean of the two derivative columns, row-wise."""
    derivs = np.asarray(derivs, dtype=np.float64)
    return (derivs[:, 0] + derivs[:, 1]) / 2.0


def descent_direction(derivs: np.ndarray) -> np.ndarray:
    """Average one-sided slope per example, the optimizers' step direction.

    Column 0 holds the derivative toward decreasing predictions, so it enters
    with a flipped sign to express both columns as slopes along increasing
    prediction values.  Where the loss is differentiable this is its gradient.
    """
    derivs = np.asarray(derivs, dtype=np.float64)
    return (derivs[:, 1] - derivs[:, 0]) / 2.0


def is_differentiable(derivs: np.ndarray) -> tuple[np.ndarray, bool]:
    """Per-row flag (exact column equality) plus the overall flag."""
    derivs = np.asarray(derivs, dtype=np.float64)
    rows = derivs[:, 0] == derivs[:, 1]
    return rows, bool(rows.all())
