"""
Serving turns over HTTP with live event streaming
=================================================

The engine ships with a small web service: sessions are created with a
POST, each turn streams its progress as server-sent events, and the full
turn trace can be fetched afterwards as canonical JSON. This script runs
the app in process with an HTTP test client, so everything below is a
real request/response exchange, just without a socket.
"""

import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from motionagents.service.app import create_app
from motionagents.service.config import EngineConfig, build_bundle
from motionagents.service.events import parse_sse
from motionagents.service.storage import SessionStore

bundle = build_bundle(EngineConfig.template_default())
store = SessionStore(Path(tempfile.mkdtemp(prefix="motionsvc-")) / "data")
client = TestClient(create_app(bundle, store))

print("health:", client.get("/healthz").json())

created = client.post("/sessions", json={"session_id": "kitchen"}).json()
print("session:", created)

# A turn is one POST; the response body is a server-sent event stream that
# narrates the run as it happens. Media rides along as a file upload.
response = client.post(
    "/sessions/kitchen/turns",
    data={"query": "What is the person doing?"},
    files={"media": ("clip.npy", b"synthetic motion frames")},
)
print("\nstreamed events:")
for name, data in parse_sse(response.text):
    if name == "task_finished":
        print(f"  {name:<14} {data['task_id']} -> {data['status']}")
    elif name == "answer":
        print(f"  {name:<14} {data['answer']!r}")
    else:
        print(f"  {name}")

# The terminal answer event is only emitted after the trace hit disk, so
# this fetch can never race the stream.
trace = client.get("/sessions/kitchen/turns/0/trace").json()
print(f"\ndurable trace: turn {trace['turn_id']},"
      f" {len(trace['rounds'])} round(s), status {trace['final_status']}")
print("session now:", client.get("/sessions/kitchen").json())

store.close()
