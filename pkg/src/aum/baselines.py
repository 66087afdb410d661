"""Comparison losses for binary classification, with full-batch gradients.

Both are convex in the predictions: a class-weighted logistic loss summed over
examples (each class carries total weight one), and a squared hinge summed
over all (negative, positive) pairs.  The pairwise loss deliberately does the
quadratic amount of work; it exists as the speed-comparison strawman.
"""

from __future__ import annotations

import numpy as np

__all__ = ["weighted_logistic", "pairwise_squared_hinge"]

_PAIR_BLOCK = 512


def _split_classes(labels, predictions):
    labels = np.asarray(labels)
    predictions = np.asarray(predictions, dtype=np.float64)
    if labels.shape != predictions.shape:
        raise ValueError("labels and predictions must have the same length")
    pos = labels == 1
    neg = labels == -1
    if not pos.any() or not neg.any():
        raise ValueError("both classes must be present")
    return labels, predictions, pos, neg


def weighted_logistic(labels, predictions):
    """Class-weighted logistic loss and its gradient.

    Each example gets weight 1 / (size of its class), so the total weight of
    positives equals that of negatives regardless of imbalance.  Correct
    saturated predictions drive the loss to zero.
    """
    labels, predictions, pos, neg = _split_classes(labels, predictions)
    w = np.where(pos, 1.0 / pos.sum(), 1.0 / neg.sum())
    margin = labels * predictions
    loss = float((w * np.logaddexp(0.0, -margin)).sum())
    # d/dz log(1 + exp(-z)) = -sigmoid(-z), with z the margin.
    sig = np.empty_like(predictions)
    m = -margin
    sig[m >= 0] = 1.0 / (1.0 + np.exp(-m[m >= 0]))
    sig[m < 0] = np.exp(m[m < 0]) / (1.0 + np.exp(m[m < 0]))
    grad = -w * labels * sig
    return loss, grad


def pairwise_squared_hinge(labels, predictions, margin: float = 1.0):
    """Squared hinge summed over all (negative, positive) pairs.

    Loss is zero exactly when every positive prediction exceeds every negative
    one by at least the margin.  Work and the gradient are computed pair by
    pair in fixed-size blocks: O(N+ * N-) time, bounded memory, deterministic
    summation order.
    """
    labels, predictions, pos, neg = _split_classes(labels, predictions)
    pos_idx = np.flatnonzero(pos)
    neg_idx = np.flatnonzero(neg)
    pos_pred = predictions[pos_idx]
    neg_pred = predictions[neg_idx]

    loss = 0.0
    grad = np.zeros_like(predictions)
    for start in range(0, len(pos_idx), _PAIR_BLOCK):
        block = slice(start, start + _PAIR_BLOCK)
        hinge = margin - pos_pred[block, None] + neg_pred[None, :]
        np.maximum(hinge, 0.0, out=hinge)
        loss += float((hinge * hinge).sum())
        grad[pos_idx[block]] += -2.0 * hinge.sum(axis=1)
        grad[neg_idx] += 2.0 * hinge.sum(axis=0)
    return loss, grad
