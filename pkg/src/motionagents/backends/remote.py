"""Remote model backend: JSON-over-HTTP, chat-completion-style body."""

from __future__ import annotations

import json
import os
import time

import httpx

from ..errors import Timeout, TransportError
from .base import Backend, BackendKind, ModelRequest, ModelResponse


class RemoteBackend(Backend):
    """One HTTP POST per invoke, with one retry on transient transport failure.

    Request body: ``{"model", "schema_tag", "messages": [...], "media": [...]}``.
    The response text is read from a fixed top-level ``"text"`` field, with
    optional ``"structured"`` alongside. Timeouts are never retried so the
    worst-case turn latency stays bounded.
    """

    transport = "remote"

    def __init__(self, model_id: str, kind: BackendKind, endpoint: str,
                 timeout_s: float, auth_env: str | None = None,
                 client: httpx.Client | None = None):
        super().__init__(model_id, kind)
        if timeout_s <= 0:
            raise ValueError("remote timeout must be positive")
        self.endpoint = endpoint
        self.timeout_s = timeout_s
        self.auth_env = auth_env
        self._client = client or httpx.Client()

    def _headers(self) -> dict[str, str]:
        headers = {"content-type": "application/json"}
        if self.auth_env:
            token = os.environ.get(self.auth_env, "")
            if token:
                headers["authorization"] = f"Bearer {token}"
        return headers

    def _body(self, request: ModelRequest) -> dict:
        messages = []
        if request.role_prompt:
            messages.append({"role": "system", "content": request.role_prompt})
        messages.append({"role": "user", "content": json.dumps(request.payload, sort_keys=True)})
        media = request.payload.get("media")
        body = {"model": self.model_id, "schema_tag": request.schema_tag, "messages": messages}
        if media is not None:
            body["media"] = media if isinstance(media, list) else [media]
        return body

    def invoke(self, request: ModelRequest) -> ModelResponse:
        body = self._body(request)
        started = time.monotonic()
        last_error: Exception | None = None
        for attempt in range(2):
            try:
                http_response = self._client.post(
                    self.endpoint, json=body, headers=self._headers(), timeout=self.timeout_s
                )
                http_response.raise_for_status()
                data = http_response.json()
                latency_ms = (time.monotonic() - started) * 1000.0
                return ModelResponse(
                    text=data.get("text", ""),
                    structured=data.get("structured"),
                    latency_ms=latency_ms,
                    tokens_in=int(data.get("tokens_in", 0)),
                    tokens_out=int(data.get("tokens_out", 0)),
                )
            except httpx.TimeoutException as exc:
                latency_ms = (time.monotonic() - started) * 1000.0
                raise Timeout(f"{self.model_id} timed out after {self.timeout_s}s", latency_ms) from exc
            except (httpx.TransportError, httpx.HTTPStatusError) as exc:
                last_error = exc
                if attempt == 0:
                    continue
        latency_ms = (time.monotonic() - started) * 1000.0
        raise TransportError(f"{self.model_id} transport failure: {last_error}", latency_ms) from last_error
