"""File formats shared by the CLI and the library.

Breakpoints travel as TSV (``example_id\\tvalue\\tdelta_fp\\tdelta_fn``) with an
optional companion capacities TSV (``example_id\\tfpp\\tfnp``); binary data as
CSV (``label,feat_1,...,feat_p``); predictions as one value per line.  Example
ids are integers and examples are ordered by ascending id, which also fixes
the row order expected of prediction files.  Floats are written with
round-trip repr so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import csv
import math

import numpy as np

from .error_model import Breakpoint, ErrorFunction, ExampleSet
from .loss import ThresholdTable
from .optim import FitResult
from .roc import RocCurve

__all__ = [
    "ParseError",
    "read_breakpoints_tsv",
    "write_breakpoints_tsv",
    "read_capacities_tsv",
    "write_capacities_tsv",
    "example_set_from_breakpoint_rows",
    "read_labels_csv",
    "write_labels_csv",
    "read_predictions",
    "write_predictions",
    "write_roc_csv",
    "write_threshold_table_tsv",
    "write_trace_csv",
    "fit_result_to_dict",
]

BREAKPOINT_HEADER = ["example_id", "value", "delta_fp", "delta_fn"]
CAPACITY_HEADER = ["example_id", "fpp", "fnp"]
ROC_HEADER = ["q", "tau_hi", "fpt", "fnt", "fpr", "tpr", "min_count"]
TABLE_HEADER = [
    "rank",
    "threshold",
    "example_id",
    "delta_fp",
    "delta_fn",
    "fp_before",
    "fp_after",
    "fn_before",
    "fn_after",
]


class ParseError(ValueError):
    """Malformed input file; the message carries the offending line number."""


def _check_header(actual, expected, path):
    if actual != expected:
        raise ParseError(f"{path}: line 1: expected header {expected}, got {actual}")


def read_breakpoints_tsv(path) -> list[tuple[int, float, int, int]]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh, delimiter="\t")
        header = next(reader, None)
        _check_header(header, BREAKPOINT_HEADER, path)
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                rows.append((int(row[0]), float(row[1]), int(row[2]), int(row[3])))
            except (ValueError, IndexError) as exc:
                raise ParseError(f"{path}: line {lineno}: {exc}") from exc
    if not rows:
        raise ParseError(f"{path}: no breakpoint rows")
    return rows


def write_breakpoints_tsv(path, example_set: ExampleSet) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, delimiter="\t", lineterminator="\n")
        writer.writerow(BREAKPOINT_HEADER)
        for i, ex in enumerate(example_set.examples, start=1):
            for bp in ex.breakpoints:
                writer.writerow([i, repr(bp.value), bp.delta_fp, bp.delta_fn])


def read_capacities_tsv(path) -> dict[int, tuple[int, int]]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh, delimiter="\t")
        header = next(reader, None)
        _check_header(header, CAPACITY_HEADER, path)
        caps = {}
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                caps[int(row[0])] = (int(row[1]), int(row[2]))
            except (ValueError, IndexError) as exc:
                raise ParseError(f"{path}: line {lineno}: {exc}") from exc
    return caps


def write_capacities_tsv(path, example_set: ExampleSet) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, delimiter="\t", lineterminator="\n")
        writer.writerow(CAPACITY_HEADER)
        for i, ex in enumerate(example_set.examples, start=1):
            writer.writerow([i, ex.fpp, ex.fnp])


def example_set_from_breakpoint_rows(rows, capacities=None) -> ExampleSet:
    """Group breakpoint rows by example id (ascending) into an ExampleSet.

    Missing capacities are inferred per example: fpp as the maximum running FP
    count, fnp as the FN count at minus infinity.
    """
    by_id: dict[int, list[Breakpoint]] = {}
    for example_id, value, dfp, dfn in rows:
        by_id.setdefault(example_id, []).append(Breakpoint(value, dfp, dfn))
    capacities = capacities or {}
    examples = []
    for example_id in sorted(by_id):
        fpp, fnp = capacities.get(example_id, (None, None))
        examples.append(ErrorFunction(tuple(by_id[example_id]), fpp=fpp, fnp=fnp))
    return ExampleSet(tuple(examples))


def read_labels_csv(path):
    """Binary CSV: returns (labels in {-1, +1}, features as an (n, p) array)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0] != "label":
            raise ParseError(f"{path}: line 1: first column must be 'label'")
        labels, feats = [], []
        width = len(header)
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != width:
                raise ParseError(f"{path}: line {lineno}: expected {width} columns")
            try:
                y = int(row[0])
                if y not in (-1, 1):
                    raise ValueError(f"label must be -1 or 1, got {y}")
                labels.append(y)
                feats.append([float(x) for x in row[1:]])
            except ValueError as exc:
                raise ParseError(f"{path}: line {lineno}: {exc}") from exc
    if not labels:
        raise ParseError(f"{path}: no data rows")
    return np.asarray(labels, dtype=np.int64), np.asarray(feats, dtype=np.float64)


def write_labels_csv(path, labels, features) -> None:
    features = np.asarray(features)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["label"] + [f"feat_{j + 1}" for j in range(features.shape[1])])
        for y, row in zip(labels, features):
            writer.writerow([int(y)] + [repr(float(x)) for x in row])


def read_predictions(path) -> np.ndarray:
    values = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                values.append(float(line))
            except ValueError as exc:
                raise ParseError(f"{path}: line {lineno}: {exc}") from exc
    if not values:
        raise ParseError(f"{path}: no predictions")
    return np.asarray(values, dtype=np.float64)


def write_predictions(path, predictions) -> None:
    with open(path, "w") as fh:
        for v in predictions:
            fh.write(repr(float(v)) + "\n")


def write_roc_csv(path, curve: RocCurve) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(ROC_HEADER)
        for q in range(len(curve)):
            tau = curve.tau_hi[q]
            writer.writerow(
                [
                    q + 1,
                    "inf" if math.isinf(tau) else repr(float(tau)),
                    int(curve.fpt[q]),
                    int(curve.fnt[q]),
                    repr(float(curve.fpr[q])),
                    repr(float(curve.tpr[q])),
                    int(curve.min_count[q]),
                ]
            )


def write_threshold_table_tsv(path, table: ThresholdTable) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, delimiter="\t", lineterminator="\n")
        writer.writerow(TABLE_HEADER)
        for k in range(len(table)):
            writer.writerow(
                [
                    k + 1,
                    repr(float(table.threshold[k])),
                    int(table.example_index[k]) + 1,
                    int(table.delta_fp[k]),
                    int(table.delta_fn[k]),
                    int(table.fp_before[k]),
                    int(table.fp_after[k]),
                    int(table.fn_before[k]),
                    int(table.fn_after[k]),
                ]
            )


def write_trace_csv(path, fit: FitResult) -> None:
    has_val = any(rec.val_aum is not None for rec in fit.trace)
    header = ["iteration", "aum", "auc", "error_rate", "step", "intercept"]
    if has_val:
        header += ["val_aum", "val_auc"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for rec in fit.trace:
            row = [
                rec.iteration,
                repr(rec.aum),
                repr(rec.auc),
                repr(rec.error_rate),
                repr(rec.step),
                repr(rec.intercept),
            ]
            if has_val:
                row += [repr(rec.val_aum), repr(rec.val_auc)]
            writer.writerow(row)


def fit_result_to_dict(fit: FitResult) -> dict:
    out = {
        "selected_iteration": fit.selected_iteration,
        "rule": fit.selection_rule,
        "intercept": float(fit.intercept),
        "iterations": len(fit.trace) - 1,
    }
    if fit.weights is not None:
        out["weights"] = [float(w) for w in fit.weights]
    if fit.predictions is not None:
        out["predictions"] = [float(p) for p in fit.predictions]
    selected = fit.trace[min(fit.selected_iteration, len(fit.trace) - 1)]
    out["metrics"] = {
        "aum": selected.aum,
        "auc": selected.auc,
        "error_rate": selected.error_rate,
    }
    if selected.val_aum is not None:
        out["metrics"]["val_aum"] = selected.val_aum
        out["metrics"]["val_auc"] = selected.val_auc
    return out
