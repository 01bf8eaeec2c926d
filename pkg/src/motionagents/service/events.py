"""Server-sent event formatting and in-process event collection."""

from __future__ import annotations

import json

SSE_EVENTS = (
    "plan_ready",
    "task_started",
    "task_finished",
    "verdict",
    "answer",
    "failure",
)


def sse_format(name: str, data: dict) -> str:
    """One SSE frame: event name plus a single JSON data line."""
    body = json.dumps(data, sort_keys=True, ensure_ascii=False)
    return f"event: {name}\ndata: {body}\n\n"


def parse_sse(stream_text: str) -> list[tuple[str, dict]]:
    """Inverse of ``sse_format`` for tests and simple clients."""
    events: list[tuple[str, dict]] = []
    name = None
    data_lines: list[str] = []
    for line in stream_text.splitlines() + [""]:
        if line.startswith("event:"):
            name = line[len("event:"):].strip()
        elif line.startswith("data:"):
            data_lines.append(line[len("data:"):].strip())
        elif not line.strip():
            if name is not None and data_lines:
                events.append((name, json.loads("\n".join(data_lines))))
            name = None
            data_lines = []
    return events


class EventCollector:
    """Engine event callback that remembers everything, for assertions."""

    def __init__(self):
        self.events: list[tuple[str, dict]] = []

    def __call__(self, name: str, data: dict) -> None:
        self.events.append((name, data))

    def names(self) -> list[str]:
        return [name for name, _ in self.events]
