"""Model backends: mock, template, record/replay, remote, and the fan-out primitive."""

from .base import (
    Backend,
    BackendKind,
    ConfidenceTable,
    ModelRequest,
    ModelResponse,
    Schema,
    canonical_json,
    confidence_for,
    invoke,
    request_fingerprint,
)
from .clock import SimulatedClock, SystemClock
from .fanout import FAILED, OK, TIMED_OUT, FanOutOutcome, fan_out
from .mock import MockBackend, MockScript, ScriptEntry
from .remote import RemoteBackend
from .replay import RecordingBackend, ReplayBackend, record_cassette
from .template import TemplateBackend, build_template_plan

__all__ = [
    "Backend",
    "BackendKind",
    "ConfidenceTable",
    "FanOutOutcome",
    "MockBackend",
    "MockScript",
    "ModelRequest",
    "ModelResponse",
    "RecordingBackend",
    "RemoteBackend",
    "ReplayBackend",
    "Schema",
    "ScriptEntry",
    "SimulatedClock",
    "SystemClock",
    "TemplateBackend",
    "build_template_plan",
    "canonical_json",
    "confidence_for",
    "fan_out",
    "invoke",
    "record_cassette",
    "request_fingerprint",
    "OK",
    "FAILED",
    "TIMED_OUT",
]
