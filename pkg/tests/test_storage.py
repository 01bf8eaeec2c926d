"""Session log durability, crash recovery, and content-addressed media."""

from __future__ import annotations

import hashlib
import json

import pytest

from motionagents.errors import (
    MediaTooLarge,
    SessionNotFound,
    StorageError,
    TurnNotFound,
)
from motionagents.service.storage import (
    MEDIA_LIMIT_BYTES,
    SessionStore,
    media_ref_for_file,
)

TRACE_A = {"turn_id": "s1:0", "final_status": "ok", "answer": "a"}
TRACE_B = {"turn_id": "s1:1", "final_status": "ok", "answer": "b"}


def test_create_and_append_round_trip(tmp_path):
    store = SessionStore(tmp_path)
    assert store.create_session("s1") is True
    assert store.create_session("s1") is False
    assert store.append_turn("s1", TRACE_A) == 0
    assert store.append_turn("s1", TRACE_B) == 1
    assert store.get_trace("s1", 0) == TRACE_A
    assert store.get_trace("s1", 1) == TRACE_B
    assert store.session_summary("s1") == {"session_id": "s1", "turns": 2}
    assert store.next_turn_index("s1") == 2
    store.close()


def test_reload_recovers_from_log_alone(tmp_path):
    store = SessionStore(tmp_path)
    store.create_session("s1")
    store.create_session("s2")
    store.append_turn("s1", TRACE_A)
    store.close()

    reloaded = SessionStore(tmp_path)
    assert sorted(reloaded.session_ids()) == ["s1", "s2"]
    assert reloaded.get_trace("s1", 0) == TRACE_A
    assert reloaded.session_summary("s2")["turns"] == 0
    # Appends continue where the log left off.
    assert reloaded.append_turn("s1", TRACE_B) == 1
    reloaded.close()


def test_unknown_session_and_turn_errors(tmp_path):
    store = SessionStore(tmp_path)
    store.create_session("s1")
    with pytest.raises(SessionNotFound):
        store.append_turn("ghost", TRACE_A)
    with pytest.raises(SessionNotFound):
        store.get_trace("ghost", 0)
    with pytest.raises(SessionNotFound):
        store.session_summary("ghost")
    with pytest.raises(SessionNotFound):
        store.try_begin_turn("ghost")
    with pytest.raises(TurnNotFound):
        store.get_trace("s1", 0)
    store.close()


def test_torn_trailing_line_is_dropped(tmp_path):
    store = SessionStore(tmp_path)
    store.create_session("s1")
    store.append_turn("s1", TRACE_A)
    store.close()
    log = tmp_path / "sessions.jsonl"
    with open(log, "a", encoding="utf-8") as fh:
        fh.write('{"record": "turn", "session_id": "s1", "TORNMARK')  # interrupted

    recovered = SessionStore(tmp_path)
    assert recovered.get_trace("s1", 0) == TRACE_A
    assert recovered.next_turn_index("s1") == 1
    # Recovery truncates the torn bytes, so the next append starts a clean
    # line and survives another reload.
    assert "TORNMARK" not in log.read_text(encoding="utf-8")
    recovered.append_turn("s1", TRACE_B)
    recovered.close()
    again = SessionStore(tmp_path)
    assert again.get_trace("s1", 1) == TRACE_B
    again.close()


def test_mid_file_corruption_is_fatal(tmp_path):
    store = SessionStore(tmp_path)
    store.create_session("s1")
    store.append_turn("s1", TRACE_A)
    store.close()
    log = tmp_path / "sessions.jsonl"
    lines = log.read_text(encoding="utf-8").splitlines()
    lines[0] = '{"broken'
    log.write_text("\n".join(lines) + "\n", encoding="utf-8")
    with pytest.raises(StorageError, match="corrupt session log"):
        SessionStore(tmp_path)


def test_turn_gap_and_unknown_records_are_fatal(tmp_path):
    log = tmp_path / "sessions.jsonl"
    log.write_text(json.dumps({"record": "turn", "session_id": "s1",
                               "turn_index": 0, "trace": {}}) + "\n",
                   encoding="utf-8")
    with pytest.raises(StorageError, match="unknown session"):
        SessionStore(tmp_path)

    log.write_text(
        json.dumps({"record": "session", "session_id": "s1"}) + "\n"
        + json.dumps({"record": "turn", "session_id": "s1", "turn_index": 5,
                      "trace": {}}) + "\n",
        encoding="utf-8")
    with pytest.raises(StorageError, match="turn index gap"):
        SessionStore(tmp_path)

    log.write_text(json.dumps({"record": "wat"}) + "\n", encoding="utf-8")
    with pytest.raises(StorageError, match="unknown record type"):
        SessionStore(tmp_path)


def test_busy_flag_serializes_turns(tmp_path):
    store = SessionStore(tmp_path)
    store.create_session("s1")
    store.create_session("s2")
    assert store.try_begin_turn("s1") is True
    assert store.try_begin_turn("s1") is False
    # Other sessions are unaffected.
    assert store.try_begin_turn("s2") is True
    store.end_turn("s1")
    assert store.try_begin_turn("s1") is True
    store.close()


def test_save_media_content_addressing(tmp_path):
    store = SessionStore(tmp_path)
    data = b"\x00\x01motion bytes"
    ref = store.save_media(data, "clip.NPY")
    digest = hashlib.sha256(data).hexdigest()
    assert ref.media_id == digest
    assert ref.motion_path.endswith(f"{digest}.npy")
    assert ref.video_path is None

    # Identical content dedupes to the same file; different name, same id.
    again = store.save_media(data, "other.npy")
    assert again.media_id == digest
    assert len(list((tmp_path / "media").iterdir())) == 1

    video = store.save_media(b"video bytes", "take.mp4")
    assert video.video_path is not None
    assert video.motion_path is None
    store.close()


def test_save_media_size_limit(tmp_path):
    store = SessionStore(tmp_path)
    with pytest.raises(MediaTooLarge):
        store.save_media(b"x" * (MEDIA_LIMIT_BYTES + 1), "big.npy")
    store.close()


def test_media_ref_for_file_matches_uploads(tmp_path):
    data = b"shared motion bytes"
    path = tmp_path / "clip.npy"
    path.write_bytes(data)

    local = media_ref_for_file(path)
    store = SessionStore(tmp_path / "store")
    uploaded = store.save_media(data, "clip.npy")
    # Identical content yields the identical media id either way, so CLI and
    # service traces agree about media identity.
    assert local.media_id == uploaded.media_id
    assert local.motion_path == str(path)
    store.close()


def test_media_ref_for_file_size_limit(tmp_path):
    path = tmp_path / "big.mp4"
    path.write_bytes(b"x" * (MEDIA_LIMIT_BYTES + 1))
    with pytest.raises(MediaTooLarge):
        media_ref_for_file(path)
