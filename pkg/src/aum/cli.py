"""Command-line front door.

Subcommands: ``compute`` (metrics for a fixed prediction vector), ``train``
(gradient-descent learners), ``synth`` (synthetic data files), and ``bench``
(gradient timing).  Scalar results go to stdout as JSON; tabular results are
CSV/TSV files.  Exit codes: 0 success, 1 usage or parse error, 2 validation
failure, 3 oracle mismatch in ``--check`` mode.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import formats, oracle, synth
from .error_model import ValidationError, from_binary_labels
from .loss import compute_aum, is_differentiable
from .optim import TrainConfig, optimize_linear, optimize_predictions
from .roc import auc, roc_curve, sm

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_MISMATCH = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class _OracleMismatch(Exception):
    pass


def _build_parser() -> _Parser:
    parser = _Parser(prog="aum", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_data_args(p, prefix=""):
        p.add_argument(f"--{prefix}breakpoints", help="breakpoint TSV")
        p.add_argument(f"--{prefix}capacities", help="capacities TSV companion")
        p.add_argument(f"--{prefix}labels", help="binary CSV (label,feat_1,...)")

    compute = sub.add_parser("compute", help="metrics for a fixed prediction vector")
    add_data_args(compute)
    compute.add_argument("--predictions", required=True, help="one value per line")
    compute.add_argument("--variant", choices=["count", "rate"], default="count")
    compute.add_argument("--roc-out", help="write the ROC curve CSV here")
    compute.add_argument("--table-out", help="write the threshold table TSV here")
    compute.add_argument(
        "--check", action="store_true", help="cross-check against the brute-force oracles"
    )

    train = sub.add_parser("train", help="fit by gradient descent")
    add_data_args(train)
    train.add_argument("--mode", choices=["predictions", "linear"], default="linear")
    train.add_argument(
        "--objective",
        choices=["aum-count", "aum-rate", "logistic", "pairs"],
        default="aum-count",
    )
    train.add_argument("--max-iterations", type=int, default=100)
    train.add_argument("--step-grid", help="comma-separated step candidates incl. 0")
    train.add_argument("--init", choices=["zero", "min-error"], default="zero")
    train.add_argument("--init-predictions", help="file with initial predictions")
    train.add_argument(
        "--selection", choices=["min-aum", "max-auc", "initial"], default="min-aum"
    )
    add_data_args(train, prefix="validation-")
    train.add_argument("--trace-out", help="write the iteration trace CSV here")
    train.add_argument("--model-out", help="write the fit result JSON here")
    train.add_argument("--seed", type=int, default=0)

    synth_p = sub.add_parser("synth", help="generate synthetic data files")
    synth_p.add_argument(
        "--kind", choices=["binary-gaussian", "changepoint-loop"], required=True
    )
    synth_p.add_argument("--n", type=int, required=True)
    synth_p.add_argument("--positive-fraction", type=float, default=0.5)
    synth_p.add_argument("--loop-share", type=float, default=0.5)
    synth_p.add_argument("--seed", type=int, default=0)
    synth_p.add_argument("--out-dir", required=True)

    bench = sub.add_parser("bench", help="time one full gradient evaluation")
    bench.add_argument(
        "--objective", choices=["aum", "logistic", "pairs"], default="aum"
    )
    bench.add_argument("--sizes", required=True, help="comma-separated example counts")
    bench.add_argument("--repeats", type=int, default=5)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--out", help="timing CSV (stdout when omitted)")
    return parser


def _load_set(args, prefix=""):
    """Example set (and features when a labels CSV is given) from the flags."""
    breakpoints = getattr(args, f"{prefix}breakpoints".replace("-", "_"))
    labels_path = getattr(args, f"{prefix}labels".replace("-", "_"))
    capacities = getattr(args, f"{prefix}capacities".replace("-", "_"))
    if (breakpoints is None) == (labels_path is None):
        raise _UsageError(
            f"exactly one of --{prefix}breakpoints / --{prefix}labels is required"
        )
    if breakpoints is not None:
        rows = formats.read_breakpoints_tsv(breakpoints)
        caps = formats.read_capacities_tsv(capacities) if capacities else None
        return formats.example_set_from_breakpoint_rows(rows, caps), None, None
    labels, features = formats.read_labels_csv(labels_path)
    return from_binary_labels(labels), labels, features


def _json_out(payload) -> None:
    print(json.dumps(payload, sort_keys=True))


def _relative_error(a, b):
    scale = max(abs(a), abs(b), 1.0)
    return abs(a - b) / scale


def _run_check(example_set, predictions, labels, variant, result):
    """Compare the fast path against every applicable oracle."""
    slow_aum = oracle.aum_by_intervals(example_set, predictions, variant)
    if _relative_error(result.aum, slow_aum) > 1e-9:
        raise _OracleMismatch(f"aum {result.aum!r} != interval oracle {slow_aum!r}")
    slow_derivs = oracle.derivs_by_finite_difference(example_set, predictions, variant)
    if np.abs(result.derivs - slow_derivs).max() > 1e-8:
        raise _OracleMismatch("derivative matrix disagrees with finite differences")
    curve = roc_curve(example_set, predictions)
    slow_sm = oracle.sm_by_enumeration(example_set, predictions)
    if abs(sm(curve) - slow_sm) > 1e-12:
        raise _OracleMismatch(f"sm {sm(curve)!r} != enumeration oracle {slow_sm!r}")
    # The two cumulative-sum forms of the area must agree exactly.
    table = result.table
    widths = np.diff(table.threshold)
    sfp = 1.0 / example_set.total_fpp if variant == "rate" else 1.0
    sfn = 1.0 / example_set.total_fnp if variant == "rate" else 1.0
    above = np.minimum(table.fp_after * sfp, table.fn_after * sfn)
    if float((widths * above[:-1]).sum()) != result.aum:
        raise _OracleMismatch("min-above and min-below area forms disagree")
    if labels is not None:
        fast_auc = auc(curve)
        slow_auc = oracle.auc_pairwise(labels, predictions)
        if abs(fast_auc - slow_auc) > 1e-12:
            raise _OracleMismatch(f"auc {fast_auc!r} != pairwise oracle {slow_auc!r}")


def _cmd_compute(args) -> int:
    example_set, labels, _ = _load_set(args)
    predictions = formats.read_predictions(args.predictions)
    if len(predictions) != example_set.n:
        raise _UsageError(
            f"{example_set.n} examples but {len(predictions)} predictions"
        )
    result = compute_aum(example_set, predictions, args.variant, with_table=True)
    curve = roc_curve(example_set, predictions)
    _, differentiable = is_differentiable(result.derivs)
    if args.roc_out:
        formats.write_roc_csv(args.roc_out, curve)
    if args.table_out:
        formats.write_threshold_table_tsv(args.table_out, result.table)
    if args.check:
        _run_check(example_set, predictions, labels, args.variant, result)
    _json_out(
        {
            "aum": result.aum,
            "auc": auc(curve),
            "sm": sm(curve),
            "n": example_set.n,
            "B": example_set.total_breakpoints,
            "Q": len(curve),
            "differentiable": differentiable,
        }
    )
    return EXIT_OK


def _parse_step_grid(text):
    if text is None:
        return None
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError as exc:
        raise _UsageError(f"bad --step-grid: {exc}") from exc


def _cmd_train(args) -> int:
    example_set, _, features = _load_set(args)
    objective = {"aum-count": "aum", "aum-rate": "aum"}.get(args.objective, args.objective)
    variant = "rate" if args.objective == "aum-rate" else "count"
    init_mode = args.init.replace("-", "_")
    init = None
    if args.init_predictions:
        init = formats.read_predictions(args.init_predictions)
        init_mode = "provided"
    try:
        config = TrainConfig(
            variant=variant,
            max_iterations=args.max_iterations,
            step_grid=_parse_step_grid(args.step_grid),
            init_mode=init_mode,
            init=init,
            seed=args.seed,
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc

    if args.mode == "predictions":
        if objective != "aum":
            raise _UsageError("predictions mode supports the aum objectives only")
        fit = optimize_predictions(example_set, config)
    else:
        if features is None:
            raise _UsageError("linear mode needs --labels input with features")
        validation = None
        if args.validation_labels or args.validation_breakpoints:
            val_set, _, val_features = _load_set(args, prefix="validation-")
            if val_features is None:
                raise _UsageError("linear validation needs --validation-labels")
            validation = (val_features, val_set)
        fit = optimize_linear(
            features,
            example_set,
            config,
            validation=validation,
            objective=objective,
            selection_rule=args.selection.replace("-", "_"),
        )
    if args.trace_out:
        formats.write_trace_csv(args.trace_out, fit)
    payload = formats.fit_result_to_dict(fit)
    if args.model_out:
        Path(args.model_out).write_text(json.dumps(payload, sort_keys=True) + "\n")
    _json_out(payload)
    return EXIT_OK


def _cmd_synth(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.kind == "binary-gaussian":
        labels, features = synth.gaussian_binary(
            args.n, args.positive_fraction, args.seed
        )
        formats.write_labels_csv(out_dir / "labels.csv", labels, features)
    else:
        example_set = synth.changepoint_loop_set(args.n, args.seed, args.loop_share)
        formats.write_breakpoints_tsv(out_dir / "breakpoints.tsv", example_set)
        formats.write_capacities_tsv(out_dir / "capacities.tsv", example_set)
    return EXIT_OK


def _bench_once(objective, example_set, labels, predictions) -> float:
    from .baselines import pairwise_squared_hinge, weighted_logistic

    start = time.perf_counter()
    if objective == "aum":
        compute_aum(example_set, predictions)
    elif objective == "logistic":
        weighted_logistic(labels, predictions)
    else:
        pairwise_squared_hinge(labels, predictions)
    return time.perf_counter() - start


def _cmd_bench(args) -> int:
    try:
        sizes = [int(s) for s in args.sizes.split(",")]
    except ValueError as exc:
        raise _UsageError(f"bad --sizes: {exc}") from exc
    if any(s < 2 for s in sizes) or args.repeats < 1:
        raise _UsageError("sizes must be >= 2 and repeats >= 1")
    rows = []
    rng = np.random.default_rng(args.seed)
    for n in sizes:
        labels = np.where(np.arange(n) % 2 == 0, 1, -1)
        predictions = rng.standard_normal(n)
        example_set = from_binary_labels(labels)
        _bench_once(args.objective, example_set, labels, predictions)  # warm caches
        times = [
            _bench_once(args.objective, example_set, labels, predictions)
            for _ in range(args.repeats)
        ]
        rows.append((args.objective, n, float(np.median(times))))
    lines = ["objective,n,median_seconds"]
    lines += [f"{obj},{n},{t!r}" for obj, n, t in rows]
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        handler = {
            "compute": _cmd_compute,
            "train": _cmd_train,
            "synth": _cmd_synth,
            "bench": _cmd_bench,
        }[args.command]
        return handler(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except formats.ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as exc:
        print("validation failed:", file=sys.stderr)
        for violation in exc.violations:
            print(f"  {violation}", file=sys.stderr)
        return EXIT_VALIDATION
    except _OracleMismatch as exc:
        print(f"oracle mismatch: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
