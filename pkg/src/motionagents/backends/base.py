"""Backend abstraction: every model dependency goes through one invoke surface."""

from __future__ import annotations

import enum
import hashlib
import json
from dataclasses import dataclass, field
from typing import Any


class BackendKind(str, enum.Enum):
    REASONER = "reasoner"
    MOTION_SPECIALIST = "motion_specialist"
    VIDEO_SPECIALIST = "video_specialist"
    JUDGE = "judge"
    EMBEDDER = "embedder"


# Output-schema tags a request can ask for. Backends key their behavior
# (scripts, templates, cassette entries) on these.
class Schema:
    PLAN = "plan"
    REPLAN = "replan"
    VERIFY_PLAN = "verify_plan"
    VERIFY_RESULTS = "verify_results"
    SELECT_TOOL = "select_tool"
    ANALYSIS = "analysis"
    AGGREGATE = "aggregate"
    PRELIMINARY = "preliminary"
    REFINE = "refine"
    GENERATE = "generate"
    JUDGE = "judge"
    EMBED = "embed"


@dataclass(frozen=True)
class ModelRequest:
    """One call to a model backend.

    ``payload`` must be JSON-serializable; media references appear in it only
    by id so that request fingerprints survive relocation of local files.
    """

    schema_tag: str
    payload: dict
    role_prompt: str = ""


@dataclass(frozen=True)
class ModelResponse:
    text: str
    structured: dict | None = None
    latency_ms: float = 0.0
    tokens_in: int = 0
    tokens_out: int = 0

    def to_dict(self) -> dict:
        return {
            "text": self.text,
            "structured": self.structured,
            "latency_ms": self.latency_ms,
            "tokens_in": self.tokens_in,
            "tokens_out": self.tokens_out,
        }


def canonical_json(payload: Any) -> str:
    """Canonical JSON used for fingerprints: sorted keys, no whitespace."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def request_fingerprint(request: ModelRequest) -> str:
    """Stable hash of schema tag + canonicalized payload.

    Role prompts are deliberately excluded so prompt-template tweaks do not
    invalidate recorded cassettes; payload drift, however, is detected.
    """
    digest = hashlib.sha256()
    digest.update(request.schema_tag.encode("utf-8"))
    digest.update(b"\x00")
    digest.update(canonical_json(request.payload).encode("utf-8"))
    return digest.hexdigest()


class Backend:
    """Base class for model backends.

    Instances are immutable after construction and safe to share across
    threads. ``model_id`` is unique per engine.
    """

    transport = "abstract"

    def __init__(self, model_id: str, kind: BackendKind):
        self.model_id = model_id
        self.kind = kind

    def invoke(self, request: ModelRequest) -> ModelResponse:
        raise NotImplementedError

    def describe(self) -> dict:
        return {"model_id": self.model_id, "kind": self.kind.value, "transport": self.transport}


def invoke(backend: Backend, request: ModelRequest) -> ModelResponse:
    """Function-call form of ``backend.invoke``."""
    return backend.invoke(request)


@dataclass(frozen=True)
class ConfidenceTable:
    """Predefined per-(model, modality) trust weights, with a default.

    All values live in [0, 1]. Lookups never fail: missing entries fall back
    to ``default``.
    """

    entries: dict[tuple[str, str], float] = field(default_factory=dict)
    default: float = 0.5

    def __post_init__(self):
        for key, value in self.entries.items():
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"confidence for {key} out of [0, 1]: {value}")
        if not 0.0 <= self.default <= 1.0:
            raise ValueError(f"default confidence out of [0, 1]: {self.default}")

    def to_dict(self) -> dict:
        return {
            "default": self.default,
            "entries": [
                {"model_id": m, "modality": mod, "confidence": c}
                for (m, mod), c in sorted(self.entries.items())
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ConfidenceTable":
        entries = {
            (e["model_id"], e["modality"]): float(e["confidence"])
            for e in data.get("entries", [])
        }
        return cls(entries=entries, default=float(data.get("default", 0.5)))


def confidence_for(model_id: str, modality, table: ConfidenceTable) -> float:
    """Exact (model, modality) entry if present, else the table default."""
    key = (model_id, getattr(modality, "value", modality))
    return table.entries.get(key, table.default)
