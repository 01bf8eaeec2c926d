"""Durable session storage: append-only JSONL log plus content-addressed media.

Every committed record is one fsynced line.  A crash can therefore leave at
most one torn trailing line, which loading tolerates; anything before it is
intact by construction.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
from pathlib import Path

from ..errors import (
    MediaTooLarge,
    SessionNotFound,
    StorageError,
    TurnNotFound,
)
from ..media import MOTION_EXTENSIONS, MediaRef

MEDIA_LIMIT_BYTES = 64 * 1024 * 1024

_RECORD_SESSION = "session"
_RECORD_TURN = "turn"


class SessionStore:
    """Sessions and their turn traces, recoverable from the log alone."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.media_dir = self.root / "media"
        self.media_dir.mkdir(exist_ok=True)
        self._log_path = self.root / "sessions.jsonl"
        self._sessions: dict[str, list[dict]] = {}
        self._lock = threading.Lock()
        self._busy: set[str] = set()
        self._replay_log()
        self._log = open(self._log_path, "a", encoding="utf-8")

    def _replay_log(self) -> None:
        if not self._log_path.exists():
            return
        with open(self._log_path, encoding="utf-8") as handle:
            lines = handle.readlines()
        last_content = max(
            (i for i, line in enumerate(lines) if line.strip()), default=-1)
        for index, line in enumerate(lines):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError:
                if index == last_content:
                    # Torn trailing line from an interrupted write; the turn it
                    # carried was never acknowledged, so dropping it is safe.
                    # Truncating restores the every-line-intact invariant and
                    # keeps later appends off the partial line.
                    offset = sum(len(l.encode("utf-8")) for l in lines[:index])
                    with open(self._log_path, "r+b") as log:
                        log.truncate(offset)
                        log.flush()
                        os.fsync(log.fileno())
                    return
                raise StorageError(
                    f"corrupt session log {self._log_path} at line {index + 1}")
            self._apply(record, index + 1)

    def _apply(self, record: dict, line_no: int) -> None:
        kind = record.get("record")
        if kind == _RECORD_SESSION:
            self._sessions.setdefault(record["session_id"], [])
        elif kind == _RECORD_TURN:
            turns = self._sessions.get(record["session_id"])
            if turns is None:
                raise StorageError(
                    f"turn for unknown session at line {line_no} of {self._log_path}")
            if record["turn_index"] != len(turns):
                raise StorageError(
                    f"turn index gap at line {line_no} of {self._log_path}")
            turns.append(record["trace"])
        else:
            raise StorageError(
                f"unknown record type {kind!r} at line {line_no} of {self._log_path}")

    def _append(self, record: dict) -> None:
        line = json.dumps(record, sort_keys=True, ensure_ascii=False)
        self._log.write(line + "\n")
        self._log.flush()
        os.fsync(self._log.fileno())

    # --- sessions ---------------------------------------------------------

    def create_session(self, session_id: str) -> bool:
        """True if created; False if the id already exists."""
        with self._lock:
            if session_id in self._sessions:
                return False
            self._append({"record": _RECORD_SESSION, "session_id": session_id})
            self._sessions[session_id] = []
            return True

    def session_ids(self) -> list[str]:
        with self._lock:
            return list(self._sessions)

    def session_summary(self, session_id: str) -> dict:
        with self._lock:
            turns = self._sessions.get(session_id)
            if turns is None:
                raise SessionNotFound(session_id)
            return {"session_id": session_id, "turns": len(turns)}

    def next_turn_index(self, session_id: str) -> int:
        with self._lock:
            turns = self._sessions.get(session_id)
            if turns is None:
                raise SessionNotFound(session_id)
            return len(turns)

    def append_turn(self, session_id: str, trace: dict) -> int:
        """Commit one turn trace; returns its index."""
        with self._lock:
            turns = self._sessions.get(session_id)
            if turns is None:
                raise SessionNotFound(session_id)
            index = len(turns)
            self._append({"record": _RECORD_TURN, "session_id": session_id,
                          "turn_index": index, "trace": trace})
            turns.append(trace)
            return index

    def get_trace(self, session_id: str, turn_index: int) -> dict:
        with self._lock:
            turns = self._sessions.get(session_id)
            if turns is None:
                raise SessionNotFound(session_id)
            if not 0 <= turn_index < len(turns):
                raise TurnNotFound(f"{session_id}:{turn_index}")
            return turns[turn_index]

    # --- turn serialization ----------------------------------------------

    def try_begin_turn(self, session_id: str) -> bool:
        """Claim the session's single turn slot; False when one is running."""
        with self._lock:
            if session_id not in self._sessions:
                raise SessionNotFound(session_id)
            if session_id in self._busy:
                return False
            self._busy.add(session_id)
            return True

    def end_turn(self, session_id: str) -> None:
        with self._lock:
            self._busy.discard(session_id)

    # --- media ------------------------------------------------------------

    def save_media(self, data: bytes, filename: str) -> MediaRef:
        """Store media under its content hash; identical uploads dedupe."""
        if len(data) > MEDIA_LIMIT_BYTES:
            raise MediaTooLarge(
                f"media of {len(data)} bytes exceeds the {MEDIA_LIMIT_BYTES} byte limit")
        digest = hashlib.sha256(data).hexdigest()
        suffix = Path(filename).suffix.lower()
        target = self.media_dir / f"{digest}{suffix}"
        if not target.exists():
            tmp = target.with_name(target.name + ".tmp")
            with open(tmp, "wb") as handle:
                handle.write(data)
                handle.flush()
                os.fsync(handle.fileno())
            os.replace(tmp, target)
        if suffix in MOTION_EXTENSIONS:
            return MediaRef(media_id=digest, motion_path=str(target))
        return MediaRef(media_id=digest, video_path=str(target))

    def close(self) -> None:
        self._log.close()


def media_ref_for_file(path: str | Path) -> MediaRef:
    """Content-hashed reference for a local file, matching service uploads."""
    data = Path(path).read_bytes()
    if len(data) > MEDIA_LIMIT_BYTES:
        raise MediaTooLarge(
            f"media of {len(data)} bytes exceeds the {MEDIA_LIMIT_BYTES} byte limit")
    digest = hashlib.sha256(data).hexdigest()
    suffix = Path(path).suffix.lower()
    if suffix in MOTION_EXTENSIONS:
        return MediaRef(media_id=digest, motion_path=str(path))
    return MediaRef(media_id=digest, video_path=str(path))
