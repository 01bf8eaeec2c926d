"""HTTP service: session management, streamed turns, traces, admin tools."""

from __future__ import annotations

import queue
import threading
import uuid

from fastapi import FastAPI, File, Form, Header, HTTPException, UploadFile
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response, StreamingResponse

from ..agents.engine import EVENT_ANSWER, EVENT_FAILURE
from ..agents.types import ExecutionTrace, FINAL_FAILED, UserQuery
from ..backends.base import canonical_json
from ..errors import MediaTooLarge, SessionNotFound, TurnNotFound
from .config import EngineBundle
from .events import sse_format
from .storage import SessionStore

_TERMINAL = (EVENT_ANSWER, EVENT_FAILURE)


def create_app(bundle: EngineBundle, store: SessionStore) -> FastAPI:
    app = FastAPI(title="motionagents service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.bundle = bundle
    app.state.store = store
    admin_token = bundle.config.admin_token

    def check_admin(provided: str | None) -> None:
        if not admin_token:
            raise HTTPException(status_code=403, detail="admin interface disabled")
        if provided != admin_token:
            raise HTTPException(status_code=401, detail="bad admin token")

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok"}

    @app.post("/sessions", status_code=201)
    def create_session(body: dict | None = None) -> dict:
        session_id = (body or {}).get("session_id") or uuid.uuid4().hex
        if not isinstance(session_id, str) or not session_id.strip():
            raise HTTPException(status_code=422, detail="session_id must be a string")
        if not store.create_session(session_id):
            raise HTTPException(status_code=409,
                                detail=f"session {session_id!r} already exists")
        return {"session_id": session_id}

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> dict:
        try:
            return store.session_summary(session_id)
        except SessionNotFound:
            raise HTTPException(status_code=404, detail=f"no session {session_id!r}")

    @app.post("/sessions/{session_id}/turns")
    async def run_turn(session_id: str, query: str = Form(...),
                       media: list[UploadFile] = File(default=[])):
        try:
            turn_index = store.next_turn_index(session_id)
        except SessionNotFound:
            raise HTTPException(status_code=404, detail=f"no session {session_id!r}")
        if not query.strip():
            raise HTTPException(status_code=422, detail="query must be non-empty")
        if not store.try_begin_turn(session_id):
            raise HTTPException(status_code=409,
                                detail="a turn is already running for this session")
        try:
            attachments = []
            for upload in media:
                data = await upload.read()
                try:
                    attachments.append(store.save_media(data, upload.filename or "upload"))
                except MediaTooLarge as exc:
                    raise HTTPException(status_code=413, detail=str(exc))
            user_query = UserQuery(text=query, attachments=tuple(attachments))
        except HTTPException:
            store.end_turn(session_id)
            raise
        except Exception as exc:
            store.end_turn(session_id)
            raise HTTPException(status_code=422, detail=str(exc))

        turn_id = f"{session_id}:{turn_index}"
        events: queue.Queue = queue.Queue()
        terminal: list[tuple[str, dict]] = []
        outcome: dict = {}

        def emit(name: str, data: dict) -> None:
            # The terminal event is released only after the trace is durable,
            # so a client seeing it can immediately fetch the trace.
            if name in _TERMINAL:
                terminal.append((name, data))
            else:
                events.put((name, data))

        def work() -> None:
            try:
                trace = bundle.engine.run_turn(user_query, turn_id=turn_id, emit=emit)
            except Exception as exc:
                failure = {"error": exc.__class__.__name__, "message": str(exc)}
                trace = ExecutionTrace(turn_id=turn_id, query=user_query, rounds=(),
                                       final_status=FINAL_FAILED, failure=failure)
                terminal.append((EVENT_FAILURE, {"turn_id": turn_id,
                                                 "failure": failure}))
            outcome["trace"] = trace
            events.put(None)

        worker = threading.Thread(target=work, daemon=True)
        worker.start()

        def stream():
            try:
                while True:
                    item = events.get()
                    if item is None:
                        break
                    yield sse_format(*item)
                worker.join()
                store.append_turn(session_id, outcome["trace"].to_dict())
                for name, data in terminal or [(EVENT_FAILURE, {
                        "turn_id": turn_id,
                        "failure": {"error": "InternalError",
                                    "message": "turn produced no terminal event"}})]:
                    yield sse_format(name, data)
            finally:
                store.end_turn(session_id)

        return StreamingResponse(stream(), media_type="text/event-stream")

    @app.get("/sessions/{session_id}/turns/{turn_index}/trace")
    def get_trace(session_id: str, turn_index: int) -> Response:
        try:
            trace = store.get_trace(session_id, turn_index)
        except SessionNotFound:
            raise HTTPException(status_code=404, detail=f"no session {session_id!r}")
        except TurnNotFound:
            raise HTTPException(status_code=404,
                                detail=f"no turn {turn_index} in session {session_id!r}")
        return Response(content=canonical_json(trace), media_type="application/json")

    @app.get("/admin/tools")
    def list_tools(x_admin_token: str | None = Header(default=None)) -> dict:
        check_admin(x_admin_token)
        tools = []
        for descriptor in bundle.registry.all_descriptors():
            entry = descriptor.to_dict()
            entry["enabled"] = not bundle.registry.is_disabled(descriptor.tool_id)
            tools.append(entry)
        return {"tools": tools}

    @app.post("/admin/tools/{tool_id}/disable")
    def disable_tool(tool_id: str,
                     x_admin_token: str | None = Header(default=None)) -> dict:
        check_admin(x_admin_token)
        try:
            bundle.registry.disable(tool_id)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"no tool {tool_id!r}")
        return {"tool_id": tool_id, "enabled": False}

    @app.post("/admin/tools/{tool_id}/enable")
    def enable_tool(tool_id: str,
                    x_admin_token: str | None = Header(default=None)) -> dict:
        check_admin(x_admin_token)
        if not any(d.tool_id == tool_id for d in bundle.registry.all_descriptors()):
            raise HTTPException(status_code=404, detail=f"no tool {tool_id!r}")
        bundle.registry.enable(tool_id)
        return {"tool_id": tool_id, "enabled": True}

    @app.exception_handler(MediaTooLarge)
    def media_too_large(_request, exc: MediaTooLarge) -> JSONResponse:
        return JSONResponse(status_code=413, content={"detail": str(exc)})

    return app
