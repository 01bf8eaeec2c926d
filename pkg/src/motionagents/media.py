"""Media references shared by queries, analysis requests, and the motion store."""

from __future__ import annotations

import enum
from dataclasses import dataclass


class Modality(str, enum.Enum):
    MOTION = "motion"
    VIDEO = "video"
    MOTION_VIDEO = "motion_video"


MOTION_EXTENSIONS = {".bvh", ".npy", ".npz", ".c3d", ".pkl"}


@dataclass(frozen=True)
class MediaRef:
    """Reference to motion capture data, a video, or both.

    Only ``media_id`` travels in backend payloads and traces; local paths stay
    on the host that resolved them.
    """

    media_id: str
    motion_path: str | None = None
    video_path: str | None = None

    def __post_init__(self):
        if not self.media_id:
            raise ValueError("media_id must be non-empty")

    @property
    def modality(self) -> Modality:
        if self.motion_path and self.video_path:
            return Modality.MOTION_VIDEO
        if self.motion_path:
            return Modality.MOTION
        return Modality.VIDEO

    def to_dict(self) -> dict:
        return {"media_id": self.media_id, "modality": self.modality.value}

    @classmethod
    def from_path(cls, media_id: str, path: str) -> "MediaRef":
        """Classify a local file as motion or video by extension."""
        lower = path.lower()
        if any(lower.endswith(ext) for ext in MOTION_EXTENSIONS):
            return cls(media_id=media_id, motion_path=path)
        return cls(media_id=media_id, video_path=path)
