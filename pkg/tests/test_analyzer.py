"""Multi-model analysis with confidence attachment."""

from __future__ import annotations

import pytest

from motionagents.backends.base import BackendKind, ConfidenceTable
from motionagents.backends.clock import SimulatedClock
from motionagents.backends.mock import MockBackend, MockScript, ScriptEntry
from motionagents.errors import QuorumNotMet
from motionagents.media import MediaRef, Modality
from motionagents.motioncore.analyzer import AnalysisRequest, ScoredResult, analyze

MOTION = MediaRef("m1", motion_path="clip.npy")
BOTH = MediaRef("m2", motion_path="clip.npy", video_path="clip.mp4")

TABLE = ConfidenceTable(entries={
    ("alpha", "motion"): 0.9,
    ("beta", "motion"): 0.4,
}, default=0.5)


def _analyzer(model_id: str, *entries: ScriptEntry) -> MockBackend:
    script = MockScript()
    script.add("analysis", *entries)
    return MockBackend(model_id, BackendKind.MOTION_SPECIALIST, script)


def test_modality_defaults_from_media():
    assert AnalysisRequest(MOTION, "q").modality is Modality.MOTION
    assert AnalysisRequest(BOTH, "q").modality is Modality.MOTION_VIDEO
    assert AnalysisRequest(BOTH, "q", modality=Modality.VIDEO).modality is Modality.VIDEO


def test_modality_must_match_media_content():
    with pytest.raises(ValueError):
        AnalysisRequest(MOTION, "q", modality=Modality.VIDEO)
    with pytest.raises(ValueError):
        AnalysisRequest(MOTION, "q", modality=Modality.MOTION_VIDEO)


def test_payload_carries_id_not_path():
    payload = AnalysisRequest(MOTION, "what happens?").to_payload()
    assert payload == {"media": {"media_id": "m1", "modality": "motion"},
                       "modality": "motion", "question": "what happens?"}


def test_analyze_attaches_table_confidences_in_backend_order():
    models = [
        _analyzer("alpha", ScriptEntry(text="jumps", latency_ms=10.0)),
        _analyzer("beta", ScriptEntry(text="hops", latency_ms=20.0)),
        _analyzer("gamma", ScriptEntry(text="leaps", latency_ms=30.0)),
    ]
    results = analyze(AnalysisRequest(MOTION, "q"), models, TABLE,
                      deadline_ms=100.0, quorum=2, clock=SimulatedClock())
    assert results == [
        ScoredResult("alpha", "jumps", 0.9),
        ScoredResult("beta", "hops", 0.4),
        ScoredResult("gamma", "leaps", 0.5),  # table default
    ]


def test_analyze_drops_failures_but_enforces_quorum():
    models = [
        _analyzer("alpha", ScriptEntry(text="jumps", latency_ms=10.0)),
        _analyzer("beta", ScriptEntry(error="transport", latency_ms=5.0)),
    ]
    results = analyze(AnalysisRequest(MOTION, "q"), models, TABLE,
                      deadline_ms=100.0, quorum=1, clock=SimulatedClock())
    assert [r.model_id for r in results] == ["alpha"]

    strict = [
        _analyzer("alpha", ScriptEntry(text="jumps", latency_ms=10.0)),
        _analyzer("beta", ScriptEntry(error="transport", latency_ms=5.0)),
    ]
    with pytest.raises(QuorumNotMet):
        analyze(AnalysisRequest(MOTION, "q"), strict, TABLE,
                deadline_ms=100.0, quorum=2, clock=SimulatedClock())


def test_analyze_requires_models():
    with pytest.raises(ValueError):
        analyze(AnalysisRequest(MOTION, "q"), [], TABLE, 100.0, 1)


def test_confidence_out_of_range_rejected():
    with pytest.raises(ValueError):
        ScoredResult("m", "t", 1.2)
    with pytest.raises(ValueError):
        ConfidenceTable(entries={("m", "motion"): -0.1})
