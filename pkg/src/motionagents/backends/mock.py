"""Scripted mock backends for deterministic tests and fault injection."""

from __future__ import annotations

import itertools
import json
import threading
from dataclasses import dataclass, field

from ..errors import ScriptExhausted, Timeout, TransportError
from .base import Backend, BackendKind, ModelRequest, ModelResponse

_ERROR_TYPES = {
    "timeout": Timeout,
    "transport": TransportError,
}


@dataclass(frozen=True)
class ScriptEntry:
    """One scripted reply: either a response or a failure to raise.

    ``error`` is one of "timeout" / "transport"; ``latency_ms`` is where the
    reply (or failure) lands on the simulated timeline.
    """

    text: str = ""
    structured: dict | None = None
    latency_ms: float = 0.0
    error: str | None = None
    error_message: str = ""

    def to_response(self) -> ModelResponse:
        return ModelResponse(text=self.text, structured=self.structured, latency_ms=self.latency_ms)


@dataclass
class MockScript:
    """Per-schema-tag queues of scripted replies.

    When ``loop`` contains a tag, its entries repeat forever; otherwise the
    queue drains and further calls raise ScriptExhausted.
    """

    entries: dict[str, list[ScriptEntry]] = field(default_factory=dict)
    loop: set[str] = field(default_factory=set)

    def add(self, schema_tag: str, *replies: ScriptEntry, loop: bool = False) -> "MockScript":
        self.entries.setdefault(schema_tag, []).extend(replies)
        if loop:
            self.loop.add(schema_tag)
        return self

    def add_text(self, schema_tag: str, *texts: str, loop: bool = False) -> "MockScript":
        return self.add(schema_tag, *(ScriptEntry(text=t) for t in texts), loop=loop)

    @classmethod
    def from_file(cls, path: str) -> "MockScript":
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        script = cls()
        for tag, spec in raw.items():
            entries = spec["entries"] if isinstance(spec, dict) else spec
            for e in entries:
                script.add(
                    tag,
                    ScriptEntry(
                        text=e.get("text", ""),
                        structured=e.get("structured"),
                        latency_ms=float(e.get("latency_ms", 0.0)),
                        error=e.get("error"),
                        error_message=e.get("error_message", ""),
                    ),
                )
            if isinstance(spec, dict) and spec.get("loop"):
                script.loop.add(tag)
        return script


class MockBackend(Backend):
    """Returns scripted replies keyed by the request's schema tag."""

    transport = "mock"

    def __init__(self, model_id: str, kind: BackendKind, script: MockScript):
        super().__init__(model_id, kind)
        self._script = script
        self._cursors: dict[str, itertools.count | int] = {}
        self._positions: dict[str, int] = {}
        self._lock = threading.Lock()
        self.calls: list[ModelRequest] = []

    def invoke(self, request: ModelRequest) -> ModelResponse:
        with self._lock:
            self.calls.append(request)
            entries = self._script.entries.get(request.schema_tag)
            if not entries:
                raise ScriptExhausted(
                    f"mock {self.model_id!r} has no script for schema {request.schema_tag!r}"
                )
            pos = self._positions.get(request.schema_tag, 0)
            if pos >= len(entries):
                if request.schema_tag in self._script.loop:
                    pos = 0
                else:
                    raise ScriptExhausted(
                        f"mock {self.model_id!r} exhausted script for schema {request.schema_tag!r}"
                    )
            self._positions[request.schema_tag] = pos + 1
            entry = entries[pos]
        if entry.error is not None:
            exc_type = _ERROR_TYPES.get(entry.error, TransportError)
            message = entry.error_message or f"scripted {entry.error} from {self.model_id}"
            raise exc_type(message, latency_ms=entry.latency_ms)
        return entry.to_response()
