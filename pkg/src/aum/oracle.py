"""Brute-force reference implementations used to validate the fast paths.

Everything here works by direct summation over breakpoints at one probe point
per constant interval, or by the limit definition of a directional derivative.
None of the sorted cumulative-sum machinery of the fast paths is shared, and
no attempt is made at speed: the oracles are quadratic or worse by design.
"""

from __future__ import annotations

import numpy as np

from .error_model import ExampleSet, require_valid

__all__ = [
    "aum_by_intervals",
    "derivs_by_finite_difference",
    "auc_pairwise",
    "sm_by_enumeration",
]


def _probes_and_widths(thresholds: np.ndarray):
    """Midpoint probes of the bounded constant intervals, plus edge probes.

    Returns (probes, widths) including one probe below the smallest threshold
    and one above the largest, both with zero width so they never contribute
    area but can be inspected.
    """
    distinct = np.unique(thresholds)
    mids = (distinct[:-1] + distinct[1:]) / 2.0
    probes = np.concatenate(([distinct[0] - 1.0], mids, [distinct[-1] + 1.0]))
    widths = np.concatenate(([0.0], np.diff(distinct), [0.0]))
    return probes, widths


def _totals_at(example_set: ExampleSet, predictions: np.ndarray, probes: np.ndarray):
    """FPT and FNT at each probe constant, by direct summation."""
    arr = example_set.arrays
    t = arr["value"] - predictions[arr["example_index"]]
    fired = t[None, :] <= probes[:, None]
    fpt = fired @ arr["delta_fp"]
    fnt = (~fired) @ (-arr["delta_fn"])
    return fpt, fnt


def aum_by_intervals(
    example_set: ExampleSet, predictions, variant: str = "count"
) -> float:
    """Loss by exact interval enumeration.

    The integrand is piecewise constant between thresholds, so evaluating the
    totals at one midpoint per bounded interval and accumulating width times
    min is exact.  The unbounded end intervals contribute nothing because FP
    starts at zero and FN ends at zero.
    """
    require_valid(example_set)
    predictions = np.asarray(predictions, dtype=np.float64)
    probes, widths = _probes_and_widths(
        example_set.arrays["value"]
        - predictions[example_set.arrays["example_index"]]
    )
    fpt, fnt = _totals_at(example_set, predictions, probes)
    if variant == "rate":
        if example_set.total_fpp < 1 or example_set.total_fnp < 1:
            raise ValueError(
                "rate variant needs at least one possible FP and one possible FN"
            )
        m = np.minimum(fpt / example_set.total_fpp, fnt / example_set.total_fnp)
    elif variant == "count":
        m = np.minimum(fpt, fnt)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return float((widths * m).sum())


def derivs_by_finite_difference(
    example_set: ExampleSet, predictions, variant: str = "count"
) -> np.ndarray:
    """Directional derivatives by one-sided differences of the interval oracle.

    The loss is piecewise linear, so a step of half the minimum positive gap
    between distinct thresholds stays inside the current linear piece and the
    difference quotient is exact.  Falls back to 1e-6 when all thresholds
    coincide.
    """
    require_valid(example_set)
    predictions = np.asarray(predictions, dtype=np.float64)
    arr = example_set.arrays
    t = np.unique(arr["value"] - predictions[arr["example_index"]])
    gaps = np.diff(t)
    h = gaps.min() / 2.0 if len(gaps) else 1e-6
    base = aum_by_intervals(example_set, predictions, variant)
    derivs = np.empty((example_set.n, 2), dtype=np.float64)
    for i in range(example_set.n):
        step = np.zeros_like(predictions)
        step[i] = h
        down = aum_by_intervals(example_set, predictions - step, variant)
        up = aum_by_intervals(example_set, predictions + step, variant)
        derivs[i, 0] = (down - base) / h
        derivs[i, 1] = (up - base) / h
    return derivs


def auc_pairwise(labels, predictions) -> float:
    """Mann-Whitney statistic: mean over (negative, positive) pairs of the
    indicator that the positive outranks the negative, with ties worth 1/2."""
    labels = np.asarray(labels)
    predictions = np.asarray(predictions, dtype=np.float64)
    pos = predictions[labels == 1]
    neg = predictions[labels == -1]
    if len(pos) == 0 or len(neg) == 0:
        raise ValueError("both classes must be present")
    diff = pos[:, None] - neg[None, :]
    return float((np.sum(diff > 0) + 0.5 * np.sum(diff == 0)) / diff.size)


def sm_by_enumeration(example_set: ExampleSet, predictions) -> float:
    """Sum of min(FPT, FNT) over the distinct constant intervals.

    The unbounded end intervals carry min zero for any valid set, so summing
    over every probe equals the sum over interior ROC points.
    """
    require_valid(example_set)
    predictions = np.asarray(predictions, dtype=np.float64)
    probes, _ = _probes_and_widths(
        example_set.arrays["value"]
        - predictions[example_set.arrays["example_index"]]
    )
    fpt, fnt = _totals_at(example_set, predictions, probes)
    return float(np.minimum(fpt, fnt).sum())
