"""Record/replay cassettes: deterministic reruns of backend interactions."""

from __future__ import annotations

import json
import threading
from collections import defaultdict, deque
from pathlib import Path

from ..errors import CassetteMismatch, SinkUnwritable
from .base import Backend, BackendKind, ModelRequest, ModelResponse, request_fingerprint


def _entry_to_response(entry: dict) -> ModelResponse:
    return ModelResponse(
        text=entry["response_text"],
        structured=entry.get("structured_fields"),
        latency_ms=float(entry.get("latency_ms", 0.0)),
    )


class ReplayBackend(Backend):
    """Replays a recorded cassette.

    Entries are consumed in recorded order within each request fingerprint;
    an unknown or exhausted fingerprint raises CassetteMismatch, which means
    the code has drifted from the recording.
    """

    transport = "replay"

    def __init__(self, model_id: str, kind: BackendKind, cassette_path: str):
        super().__init__(model_id, kind)
        self.cassette_path = str(cassette_path)
        self._queues: dict[str, deque[dict]] = defaultdict(deque)
        self._lock = threading.Lock()
        with open(cassette_path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                entry = json.loads(line)
                self._queues[entry["fingerprint"]].append(entry)

    def invoke(self, request: ModelRequest) -> ModelResponse:
        fingerprint = request_fingerprint(request)
        with self._lock:
            queue = self._queues.get(fingerprint)
            if not queue:
                raise CassetteMismatch(
                    f"no recorded response for fingerprint {fingerprint[:12]}... "
                    f"(schema {request.schema_tag!r}) in {self.cassette_path}"
                )
            entry = queue.popleft()
        return _entry_to_response(entry)


class RecordingBackend(Backend):
    """Wraps a backend and persists every call as (fingerprint, response)."""

    transport = "recording"

    def __init__(self, inner: Backend, sink_path: str):
        super().__init__(inner.model_id, inner.kind)
        if inner.transport in ("replay", "recording"):
            raise ValueError(f"cannot record a {inner.transport} backend")
        self._inner = inner
        self._sink_path = str(sink_path)
        self._lock = threading.Lock()
        try:
            Path(sink_path).parent.mkdir(parents=True, exist_ok=True)
            self._sink = open(sink_path, "a", encoding="utf-8")
        except OSError as exc:
            raise SinkUnwritable(f"cannot open cassette sink {sink_path}: {exc}") from exc

    def invoke(self, request: ModelRequest) -> ModelResponse:
        response = self._inner.invoke(request)
        entry = {
            "fingerprint": request_fingerprint(request),
            "schema_tag": request.schema_tag,
            "response_text": response.text,
            "structured_fields": response.structured,
            "latency_ms": response.latency_ms,
        }
        with self._lock:
            self._sink.write(json.dumps(entry, sort_keys=True, ensure_ascii=False) + "\n")
            self._sink.flush()
        return response

    def close(self) -> None:
        self._sink.close()


def record_cassette(backend: Backend, sink: str) -> RecordingBackend:
    """Wrap ``backend`` so every invoke lands in the cassette at ``sink``."""
    return RecordingBackend(backend, sink)
