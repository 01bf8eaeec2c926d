"""Multi-model analysis fan-out with predefined per-modality confidences."""

from __future__ import annotations

from dataclasses import dataclass

from ..backends.base import Backend, ConfidenceTable, ModelRequest, Schema, confidence_for
from ..backends.fanout import OK, fan_out
from ..errors import QuorumNotMet
from ..media import MediaRef, Modality


@dataclass(frozen=True)
class AnalysisRequest:
    """One question about one piece of media."""

    media: MediaRef
    question: str
    modality: Modality | None = None

    def __post_init__(self):
        # Modality defaults to what the media actually contains; an explicit
        # value must not claim content the media does not have.
        if self.modality is None:
            object.__setattr__(self, "modality", self.media.modality)
        elif self.modality == Modality.MOTION and self.media.motion_path is None:
            raise ValueError("motion modality requested but media has no motion data")
        elif self.modality == Modality.VIDEO and self.media.video_path is None:
            raise ValueError("video modality requested but media has no video data")
        elif self.modality == Modality.MOTION_VIDEO and (
            self.media.motion_path is None or self.media.video_path is None
        ):
            raise ValueError("motion_video modality requires both motion and video data")

    def to_payload(self) -> dict:
        return {
            "media": self.media.to_dict(),
            "modality": self.modality.value,
            "question": self.question,
        }


@dataclass(frozen=True)
class ScoredResult:
    """One model's analysis text with its predefined confidence."""

    model_id: str
    text: str
    confidence: float

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence out of [0, 1]: {self.confidence}")

    def to_dict(self) -> dict:
        return {"model_id": self.model_id, "text": self.text, "confidence": self.confidence}

    @classmethod
    def from_dict(cls, data: dict) -> "ScoredResult":
        return cls(model_id=data["model_id"], text=data["text"],
                   confidence=float(data["confidence"]))


def analyze(request: AnalysisRequest, models: list[Backend], table: ConfidenceTable,
            deadline_ms: float, quorum: int, clock=None,
            role_prompt: str = "") -> list[ScoredResult]:
    """Fan the request out to all models and score the survivors.

    Failed or timed-out models are omitted; the call succeeds only when at
    least ``quorum`` results came back. Results keep backend order.
    """
    if not models:
        raise ValueError("analyze requires at least one model")
    model_request = ModelRequest(
        schema_tag=Schema.ANALYSIS, payload=request.to_payload(), role_prompt=role_prompt
    )
    outcomes = fan_out(models, model_request, deadline_ms, quorum, clock=clock)
    results = []
    for outcome in outcomes:
        if outcome.status != OK:
            continue
        results.append(
            ScoredResult(
                model_id=outcome.model_id,
                text=outcome.response.text,
                confidence=confidence_for(outcome.model_id, request.modality, table),
            )
        )
    return results


__all__ = ["AnalysisRequest", "ScoredResult", "analyze", "QuorumNotMet"]
