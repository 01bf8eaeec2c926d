"""Accuracy metrics for repetition counting."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..errors import EmptyInput, LengthMismatch


def repcount_metrics(predictions: Sequence[float], truths: Sequence[float]) -> dict:
    """Off-by-zero and off-by-one rates plus normalized MAE and plain RMSE.

    MAE normalizes each absolute error by max(truth, 1) so zero-truth cases
    stay finite.
    """
    if len(predictions) != len(truths):
        raise LengthMismatch(
            f"{len(predictions)} predictions vs {len(truths)} truths")
    if not len(predictions):
        raise EmptyInput("no prediction pairs to score")
    pred = np.asarray(predictions, dtype=float)
    true = np.asarray(truths, dtype=float)
    error = np.abs(pred - true)
    return {
        "obz": float(np.mean(error == 0.0)),
        "obo": float(np.mean(error <= 1.0)),
        "mae": float(np.mean(error / np.maximum(true, 1.0))),
        "rmse": float(np.sqrt(np.mean((pred - true) ** 2))),
    }
