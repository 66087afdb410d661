"""Exact breakpoint representation of per-example false positive / false negative
error functions.

Each example's FP and FN counts are piecewise constant, right continuous
functions of its real-valued prediction.  FP starts at zero for very negative
predictions, FN ends at zero for very positive predictions, and every
discontinuity is stored as an explicit breakpoint.  Binary classification is
the special case of one breakpoint per example at zero.

All types here are immutable after construction and every operation is a pure
function of its inputs, so they are safe to share across threads.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property
from math import isfinite

import numpy as np

__all__ = [
    "Breakpoint",
    "ErrorFunction",
    "ExampleSet",
    "ValidationError",
    "from_binary_labels",
    "evaluate",
    "validate",
    "require_valid",
    "min_error_prediction",
]


class ValidationError(ValueError):
    """Raised in strict mode when an example set violates its invariants."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True)
class Breakpoint:
    """One discontinuity of an example's error functions.

    ``delta_fp`` / ``delta_fn`` are the jumps of the FP / FN counts at
    predicted value ``value`` (right continuous, so the new level holds at
    ``value`` itself).
    """

    value: float
    delta_fp: int
    delta_fn: int


@dataclass(frozen=True)
class ErrorFunction:
    """Breakpoints of one example plus its error capacities ``fpp`` / ``fnp``.

    Breakpoints are canonicalized on construction: sorted by value, equal
    values merged by summing their deltas, and merges that cancel to (0, 0)
    dropped.  Capacities left as None are inferred: ``fpp`` as the maximum of
    the running FP count, ``fnp`` as the FN count at minus infinity.
    """

    breakpoints: tuple[Breakpoint, ...]
    fpp: int | None = None
    fnp: int | None = None

    def __post_init__(self):
        bps = self.breakpoints
        if len(bps) > 1:
            merged: dict[float, list[int]] = {}
            for bp in bps:
                acc = merged.setdefault(float(bp.value), [0, 0])
                acc[0] += int(bp.delta_fp)
                acc[1] += int(bp.delta_fn)
            bps = tuple(
                Breakpoint(v, dfp, dfn)
                for v, (dfp, dfn) in sorted(merged.items())
                if (dfp, dfn) != (0, 0)
            )
            object.__setattr__(self, "breakpoints", bps)
        if self.fpp is None:
            run, top = 0, 0
            for bp in bps:
                run += bp.delta_fp
                if run > top:
                    top = run
            object.__setattr__(self, "fpp", top)
        if self.fnp is None:
            object.__setattr__(self, "fnp", -sum(bp.delta_fn for bp in bps))


# Binary labels reduce to two immutable example shapes, shared by reference.
_POSITIVE = ErrorFunction((Breakpoint(0.0, 0, -1),), fpp=0, fnp=1)
_NEGATIVE = ErrorFunction((Breakpoint(0.0, 1, 0),), fpp=1, fnp=0)


@dataclass(frozen=True)
class ExampleSet:
    """A collection of per-example error functions sharing one prediction vector."""

    examples: tuple[ErrorFunction, ...]

    def __post_init__(self):
        object.__setattr__(self, "examples", tuple(self.examples))

    @property
    def n(self) -> int:
        return len(self.examples)

    @cached_property
    def total_breakpoints(self) -> int:
        return len(self.arrays["value"])

    @cached_property
    def total_fpp(self) -> int:
        return int(self.arrays["fpp"].sum())

    @cached_property
    def total_fnp(self) -> int:
        return int(self.arrays["fnp"].sum())

    @cached_property
    def arrays(self) -> dict[str, np.ndarray]:
        """Flat breakpoint arrays plus per-example capacities.

        Breakpoints appear grouped by example in example order, sorted by
        value within each example; ``example_index`` is therefore
        non-decreasing.
        """
        vals, dfp, dfn, idx = [], [], [], []
        for i, ex in enumerate(self.examples):
            for bp in ex.breakpoints:
                vals.append(bp.value)
                dfp.append(bp.delta_fp)
                dfn.append(bp.delta_fn)
                idx.append(i)
        return {
            "value": np.asarray(vals, dtype=np.float64),
            "delta_fp": np.asarray(dfp, dtype=np.int64),
            "delta_fn": np.asarray(dfn, dtype=np.int64),
            "example_index": np.asarray(idx, dtype=np.int64),
            "fpp": np.array([ex.fpp for ex in self.examples], dtype=np.int64),
            "fnp": np.array([ex.fnp for ex in self.examples], dtype=np.int64),
        }

    @cached_property
    def violations(self) -> tuple[str, ...]:
        if self.n > 0 and self._fast_scan_clean():
            return ()
        return tuple(_validate_slow(self))

    @property
    def is_valid(self) -> bool:
        return not self.violations

    def _fast_scan_clean(self) -> bool:
        """Vectorized validity scan; on failure the slow path names culprits."""
        arr = self.arrays
        counts = np.bincount(arr["example_index"], minlength=self.n)
        if (counts == 0).any():
            return False
        if not np.isfinite(arr["value"]).all():
            return False
        if ((arr["delta_fp"] == 0) & (arr["delta_fn"] == 0)).any():
            return False
        if (arr["fpp"] < 0).any() or (arr["fnp"] < 0).any():
            return False
        idx = arr["example_index"]
        starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
        # Running FP within each example: global cumsum minus the offset just
        # before the example starts.
        cum_fp = np.cumsum(arr["delta_fp"])
        base_fp = np.concatenate(([0], cum_fp))[starts]
        run_fp = cum_fp - np.repeat(base_fp, counts)
        if (run_fp < 0).any() or (run_fp > arr["fpp"][idx]).any():
            return False
        # Running FN scanning right to left within each example.
        cum_nfn = np.cumsum(-arr["delta_fn"])
        ends = np.cumsum(counts) - 1
        end_fn = cum_nfn[ends]
        before = np.concatenate(([0], cum_nfn))[:-1]
        run_fn = np.repeat(end_fn, counts) - before
        if (run_fn < 0).any() or (run_fn > arr["fnp"][idx]).any():
            return False
        return True


def from_binary_labels(labels) -> ExampleSet:
    """Build the example set of a binary classification problem.

    Positive labels contribute one FN breakpoint at zero, negative labels one
    FP breakpoint at zero.  Warns when a class is absent, since rate-based
    quantities (FPR/TPR, hence ROC and AUC) are undefined in that case.
    """
    labels = np.asarray(labels)
    if labels.size == 0:
        raise ValueError("label vector is empty")
    if not np.all(np.isin(labels, (-1, 1))):
        raise ValueError("labels must be -1 or +1")
    if len(np.unique(labels)) < 2:
        warnings.warn(
            "only one class present; FPR/TPR and ROC quantities are undefined",
            UserWarning,
            stacklevel=2,
        )
    positive = labels == 1
    example_set = ExampleSet(tuple(_POSITIVE if p else _NEGATIVE for p in positive))
    # Seed the flat arrays directly: with only two example shapes they are a
    # pure function of the label signs, and skipping the generic per-object
    # walk matters for million-example benchmark sets.
    n = len(labels)
    example_set.__dict__["arrays"] = {
        "value": np.zeros(n, dtype=np.float64),
        "delta_fp": np.where(positive, 0, 1).astype(np.int64),
        "delta_fn": np.where(positive, -1, 0).astype(np.int64),
        "example_index": np.arange(n, dtype=np.int64),
        "fpp": np.where(positive, 0, 1).astype(np.int64),
        "fnp": np.where(positive, 1, 0).astype(np.int64),
    }
    return example_set


def evaluate(err: ErrorFunction, y: float) -> tuple[int, int]:
    """FP and FN counts of one example at predicted value ``y``.

    Right continuity: a breakpoint exactly at ``y`` counts toward FP and no
    longer toward FN.
    """
    fp = sum(bp.delta_fp for bp in err.breakpoints if bp.value <= y)
    fn = sum(-bp.delta_fn for bp in err.breakpoints if bp.value > y)
    return fp, fn


def _validate_slow(example_set: ExampleSet) -> list[str]:
    problems: list[str] = []
    if example_set.n == 0:
        return ["example set is empty"]
    for i, ex in enumerate(example_set.examples, start=1):
        if not ex.breakpoints:
            problems.append(f"example {i}: no breakpoints")
            continue
        if ex.fpp < 0 or ex.fnp < 0:
            problems.append(f"example {i}: negative capacity")
        run_fp = 0
        for k, bp in enumerate(ex.breakpoints, start=1):
            if not isfinite(bp.value):
                problems.append(f"example {i}: non-finite value at breakpoint {k}")
            if bp.delta_fp == 0 and bp.delta_fn == 0:
                problems.append(f"example {i}: zero-delta breakpoint {k}")
            run_fp += bp.delta_fp
            if run_fp < 0:
                problems.append(f"example {i}: FP prefix negative at breakpoint {k}")
            elif run_fp > ex.fpp:
                problems.append(f"example {i}: FP exceeds fpp at breakpoint {k}")
        run_fn = 0
        for k in range(len(ex.breakpoints), 0, -1):
            run_fn += -ex.breakpoints[k - 1].delta_fn
            if run_fn < 0:
                problems.append(f"example {i}: FN suffix negative at breakpoint {k}")
            elif run_fn > ex.fnp:
                problems.append(f"example {i}: FN exceeds fnp at breakpoint {k}")
    return problems


def validate(example_set: ExampleSet) -> list[str]:
    """Diagnostics for an example set; empty list means valid.

    Checks, per example: finite breakpoint values, no (0, 0) deltas, the
    running FP count stays within [0, fpp] scanning left to right, and the FN
    count stays within [0, fnp] scanning right to left from zero.
    """
    return list(example_set.violations)


def require_valid(example_set: ExampleSet) -> None:
    """Strict mode: raise ValidationError when any diagnostic fires."""
    if not example_set.is_valid:
        raise ValidationError(example_set.violations)


def _constant_intervals(values: np.ndarray, errors: np.ndarray):
    """Merge adjacent constant intervals with equal error into maximal runs.

    ``values`` are the K sorted distinct breakpoint positions; ``errors`` holds
    the K+1 error levels of the intervals they delimit.  Returns (low, high,
    error) runs with infinite endpoints at the edges.
    """
    bounds = np.concatenate(([-np.inf], values, [np.inf]))
    runs = []
    start = 0
    for k in range(1, len(errors) + 1):
        if k == len(errors) or errors[k] != errors[start]:
            runs.append((bounds[start], bounds[k], errors[start]))
            start = k
    return runs


def _pick_widest(runs) -> float:
    """Representative point of the widest minimum-error run.

    Midpoint for bounded runs; one unit inside the finite endpoint for
    half-bounded runs; zero when unbounded on both sides.  Ties on width are
    broken toward the run with the larger lower endpoint.
    """
    best = min(r[2] for r in runs)
    optimal = [r for r in runs if r[2] == best]
    lo, hi, _ = max(optimal, key=lambda r: (r[1] - r[0], r[0]))
    if lo == -np.inf and hi == np.inf:
        return 0.0
    if hi == np.inf:
        return lo + 1.0
    if lo == -np.inf:
        return hi - 1.0
    return (lo + hi) / 2.0


def min_error_prediction(err: ErrorFunction) -> float:
    """A predicted value minimizing this example's FP + FN count.

    The minimizer is an interval in general; the widest such interval is
    chosen and a deterministic representative returned (midpoint, or one unit
    inside a single finite endpoint, or zero if unconstrained).
    """
    values = np.array([bp.value for bp in err.breakpoints])
    dfp = np.array([bp.delta_fp for bp in err.breakpoints])
    dfn = np.array([bp.delta_fn for bp in err.breakpoints])
    fp_levels = np.concatenate(([0], np.cumsum(dfp)))
    fn_levels = np.concatenate(([0], np.cumsum(dfn))) - np.sum(dfn)
    return _pick_widest(_constant_intervals(values, fp_levels + fn_levels))
