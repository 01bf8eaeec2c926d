"""Repetition-count metrics against a hand oracle and a brute-force reference."""

from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from motionagents.benchharness.metrics import repcount_metrics
from motionagents.errors import EmptyInput, LengthMismatch


def oracle_metrics(predictions, truths):
    """Plain-Python reference implementation."""
    errors = [abs(p - t) for p, t in zip(predictions, truths)]
    n = len(errors)
    return {
        "obz": sum(1 for e in errors if e == 0) / n,
        "obo": sum(1 for e in errors if e <= 1) / n,
        "mae": sum(e / max(t, 1) for e, t in zip(errors, truths)) / n,
        "rmse": math.sqrt(sum(e * e for e in errors) / n),
    }


def test_hand_case():
    # preds [3, 5] vs truths [3, 4]: one exact, both within one;
    # mae = (0/3 + 1/4) / 2 = 0.125; rmse = sqrt((0 + 1) / 2).
    got = repcount_metrics([3, 5], [3, 4])
    assert got["obz"] == 0.5
    assert got["obo"] == 1.0
    assert got["mae"] == pytest.approx(0.125, abs=1e-12)
    assert got["rmse"] == pytest.approx(0.7071067811865476, abs=1e-12)


def test_perfect_predictions():
    got = repcount_metrics([0, 2, 7], [0, 2, 7])
    assert got == {"obz": 1.0, "obo": 1.0, "mae": 0.0, "rmse": 0.0}


def test_zero_truth_stays_finite():
    # Normalizing by max(truth, 1) keeps the zero-truth case bounded.
    got = repcount_metrics([3], [0])
    assert got["mae"] == 3.0
    assert got["rmse"] == 3.0
    assert got["obz"] == 0.0
    assert got["obo"] == 0.0


def test_input_validation():
    with pytest.raises(LengthMismatch):
        repcount_metrics([1, 2], [1])
    with pytest.raises(EmptyInput):
        repcount_metrics([], [])


@settings(max_examples=300, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 60), st.integers(0, 60)),
                min_size=1, max_size=40))
def test_matches_oracle(pairs):
    predictions = [p for p, _ in pairs]
    truths = [t for _, t in pairs]
    got = repcount_metrics(predictions, truths)
    want = oracle_metrics(predictions, truths)
    for key in ("obz", "obo", "mae", "rmse"):
        assert got[key] == pytest.approx(want[key], abs=1e-9), key


@settings(max_examples=300, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 60), st.integers(0, 60)),
                min_size=1, max_size=40))
def test_bounds(pairs):
    predictions = [p for p, _ in pairs]
    truths = [t for _, t in pairs]
    got = repcount_metrics(predictions, truths)
    assert 0.0 <= got["obz"] <= got["obo"] <= 1.0
    assert got["mae"] >= 0.0
    assert got["rmse"] >= 0.0
    # RMSE dominates the unnormalized MAE, so mae <= rmse can fail when
    # normalization shrinks errors; only the exact-match relation is universal:
    if got["obz"] == 1.0:
        assert got["mae"] == 0.0 and got["rmse"] == 0.0
