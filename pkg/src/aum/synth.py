"""Synthetic data generators: fixtures, desk-scale datasets, and fuzz inputs.

All generators are deterministic per seed.  Fuzz instances draw every value
and prediction from a dyadic lattice (multiples of 1/32) so that threshold
arithmetic is exact in binary floating point: ties are honest ties and
exactness properties can be asserted without tolerance.
"""

from __future__ import annotations

import numpy as np

from .error_model import Breakpoint, ErrorFunction, ExampleSet

__all__ = [
    "loop_example_pair",
    "gaussian_binary",
    "changepoint_loop_set",
    "random_example_set",
    "random_binary_instance",
]

_GRID = 32.0  # dyadic lattice step denominator


def loop_example_pair() -> ExampleSet:
    """The two-example fixture whose ROC curve loops.

    Example A has a non-monotone FN function (1 outside [0, 1) and [2, inf)),
    example B a non-monotone FP function (1 on [0, 1) and [2, inf)).  With
    predictions (0, -0.5) the curve traverses the unit square twice.
    """
    a = ErrorFunction(
        (Breakpoint(0.0, 0, -1), Breakpoint(1.0, 0, 1), Breakpoint(2.0, 0, -1)),
        fpp=0,
        fnp=1,
    )
    b = ErrorFunction(
        (Breakpoint(0.0, 1, 0), Breakpoint(1.0, -1, 0), Breakpoint(2.0, 1, 0)),
        fpp=1,
        fnp=0,
    )
    return ExampleSet((a, b))


def gaussian_binary(n: int, positive_fraction: float, seed: int):
    """Two-feature Gaussian mixture: positives at (+1, +1), negatives at
    (-1, -1), unit covariance.  Labels are Bernoulli draws of the positive
    fraction, with one element flipped if a class would otherwise be empty.

    Returns (labels in {-1, +1}, features of shape (n, 2)).
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if not 0.0 < positive_fraction < 1.0:
        raise ValueError("positive fraction must be in (0, 1)")
    rng = np.random.default_rng(seed)
    labels = np.where(rng.random(n) < positive_fraction, 1, -1).astype(np.int64)
    if (labels == 1).all():
        labels[0] = -1
    elif (labels == -1).all():
        labels[0] = 1
    centers = np.where(labels[:, None] == 1, 1.0, -1.0)
    features = centers + rng.standard_normal((n, 2))
    return labels, features


def changepoint_loop_set(n: int, seed: int, loop_share: float = 0.5) -> ExampleSet:
    """Changepoint-style set mixing loop-pattern and monotone examples.

    The first round(loop_share * n) examples alternate the two fixed loop
    patterns (thresholds 0, 1, 2); the rest are single-breakpoint monotone
    examples with a random class and a random lattice threshold.  With n=2 and
    loop_share=1 this is exactly ``loop_example_pair``.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if not 0.0 <= loop_share <= 1.0:
        raise ValueError("loop share must be in [0, 1]")
    rng = np.random.default_rng(seed)
    n_loop = int(round(loop_share * n))
    pair = loop_example_pair()
    examples = [pair.examples[i % 2] for i in range(n_loop)]
    for _ in range(n - n_loop):
        v = int(rng.integers(-2 * int(_GRID), 4 * int(_GRID))) / _GRID
        if rng.random() < 0.5:
            examples.append(ErrorFunction((Breakpoint(v, 0, -1),), fpp=0, fnp=1))
        else:
            examples.append(ErrorFunction((Breakpoint(v, 1, 0),), fpp=1, fnp=0))
    # Rate computations and ROC curves need at least one possible error of
    # each kind in the whole set.
    has_fn = any(e.fnp > 0 for e in examples)
    has_fp = any(e.fpp > 0 for e in examples)
    if not has_fn:
        examples[-1] = ErrorFunction((Breakpoint(0.0, 0, -1),), fpp=0, fnp=1)
    if not has_fp:
        examples[0] = ErrorFunction((Breakpoint(0.0, 1, 0),), fpp=1, fnp=0)
    return ExampleSet(tuple(examples))


def _lattice(rng, size, low=-4.0, high=4.0):
    return rng.integers(int(low * _GRID), int(high * _GRID), size=size) / _GRID


def _monotone_walk(rng, k, max_level):
    """Non-negative integer levels for k breakpoints, ending at the maximum."""
    levels = rng.integers(0, max_level + 1, size=k)
    levels[-1] = levels.max() if levels.max() > 0 else 1
    return levels


def _random_error_function(rng) -> ErrorFunction:
    """One random valid example: binary-like, FP walk, FN walk, or both."""
    kind = rng.integers(0, 4)
    if kind == 0:
        return ErrorFunction((Breakpoint(0.0, 0, -1),), fpp=0, fnp=1)
    if kind == 1:
        return ErrorFunction((Breakpoint(0.0, 1, 0),), fpp=1, fnp=0)
    k = int(rng.integers(1, 6))
    values = np.sort(
        rng.choice(np.arange(-4 * int(_GRID), 4 * int(_GRID)), size=k, replace=False)
        / _GRID
    )
    want_fp = kind == 2 or rng.random() < 0.5
    want_fn = kind == 3 or not want_fp or rng.random() < 0.5
    # FP levels run from 0 below the first value to their maximum at the top;
    # FN levels run from their maximum at the bottom to 0 above the last.
    fp_levels = np.zeros(k + 1, dtype=np.int64)
    fn_levels = np.zeros(k + 1, dtype=np.int64)
    if want_fp:
        fp_levels[1:] = _monotone_walk(rng, k, 3)
    if want_fn:
        fn_levels[:-1] = _monotone_walk(rng, k, 3)[::-1]
        fn_levels[0] = fn_levels.max()
    dfp = np.diff(fp_levels)
    dfn = np.diff(fn_levels)
    keep = (dfp != 0) | (dfn != 0)
    if not keep.any():
        return ErrorFunction((Breakpoint(float(values[0]), 0, -1),), fpp=0, fnp=1)
    bps = tuple(
        Breakpoint(float(v), int(p), int(f))
        for v, p, f in zip(values[keep], dfp[keep], dfn[keep])
    )
    return ErrorFunction(bps, fpp=int(fp_levels.max()), fnp=int(fn_levels.max()))


def random_example_set(rng, max_examples: int = 20, max_breakpoints: int = 100):
    """Random valid example set plus a lattice prediction vector.

    Mixes binary-like and changepoint-style examples, guarantees at least one
    possible FP and FN in the set, and respects the breakpoint budget.
    """
    n = int(rng.integers(1, max_examples + 1))
    examples = []
    budget = max_breakpoints
    for i in range(n):
        ex = _random_error_function(rng)
        if len(ex.breakpoints) > budget - (n - i - 1):
            # single-breakpoint fallback keeps the total within budget
            v = float(_lattice(rng, 1)[0])
            if rng.random() < 0.5:
                ex = ErrorFunction((Breakpoint(v, 0, -1),), fpp=0, fnp=1)
            else:
                ex = ErrorFunction((Breakpoint(v, 1, 0),), fpp=1, fnp=0)
        budget -= len(ex.breakpoints)
        examples.append(ex)
    if not any(e.fnp > 0 for e in examples):
        examples[0] = ErrorFunction((Breakpoint(0.0, 0, -1),), fpp=0, fnp=1)
    if not any(e.fpp > 0 for e in examples):
        examples[-1] = ErrorFunction((Breakpoint(0.0, 1, 0),), fpp=1, fnp=0)
    example_set = ExampleSet(tuple(examples))
    predictions = _lattice(rng, example_set.n)
    return example_set, predictions


def random_binary_instance(rng, max_examples: int = 50):
    """Random binary-label instance with deliberate prediction ties.

    Returns (labels, predictions, example set); predictions sit on a coarse
    lattice so cross-class ties occur often.
    """
    from .error_model import from_binary_labels

    n = int(rng.integers(2, max_examples + 1))
    labels = np.where(rng.random(n) < 0.5, 1, -1).astype(np.int64)
    if (labels == 1).all():
        labels[0] = -1
    elif (labels == -1).all():
        labels[0] = 1
    predictions = rng.integers(-8, 9, size=n) / 4.0
    return labels, predictions, from_binary_labels(labels)
