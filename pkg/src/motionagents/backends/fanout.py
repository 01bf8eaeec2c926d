"""Concurrent fan-out to many backends with a deadline and a quorum."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor, wait
from dataclasses import dataclass

from ..errors import QuorumNotMet
from .base import Backend, ModelRequest, ModelResponse
from .clock import SystemClock

OK = "ok"
FAILED = "failed"
TIMED_OUT = "timed_out"


@dataclass(frozen=True)
class FanOutOutcome:
    """Exactly one label per backend: ok, failed, or timed_out."""

    model_id: str
    status: str
    response: ModelResponse | None = None
    error: str | None = None


def _simulated_fan_out(backends, request, deadline_ms) -> tuple[list[FanOutOutcome], float]:
    """Replay the concurrent timeline from scripted latencies.

    Every backend starts at t=0; a reply (or scripted failure) that would
    surface after the deadline is observed as timed_out. Wall time is when
    the last in-deadline reply lands, capped at the deadline.
    """
    outcomes: list[FanOutOutcome] = []
    completion_times: list[float] = []
    for backend in backends:
        try:
            response = backend.invoke(request)
        except Exception as exc:
            latency = float(getattr(exc, "latency_ms", 0.0))
            completion_times.append(latency)
            if latency > deadline_ms:
                outcomes.append(FanOutOutcome(backend.model_id, TIMED_OUT,
                                              error=f"no reply within {deadline_ms}ms"))
            else:
                outcomes.append(FanOutOutcome(backend.model_id, FAILED, error=str(exc)))
        else:
            completion_times.append(response.latency_ms)
            if response.latency_ms > deadline_ms:
                outcomes.append(FanOutOutcome(backend.model_id, TIMED_OUT,
                                              error=f"no reply within {deadline_ms}ms"))
            else:
                outcomes.append(FanOutOutcome(backend.model_id, OK, response=response))
    wall_ms = max((min(t, deadline_ms) for t in completion_times), default=0.0)
    return outcomes, wall_ms


def _threaded_fan_out(backends, request, deadline_ms) -> list[FanOutOutcome]:
    # One worker per backend so every invocation starts before any is awaited.
    pool = ThreadPoolExecutor(max_workers=len(backends))
    try:
        futures = {pool.submit(backend.invoke, request): backend for backend in backends}
        _, pending = wait(futures, timeout=deadline_ms / 1000.0)
        outcomes = []
        for future, backend in futures.items():
            if future in pending:
                future.cancel()
                outcomes.append(FanOutOutcome(backend.model_id, TIMED_OUT,
                                              error=f"no reply within {deadline_ms}ms"))
            else:
                exc = future.exception()
                if exc is not None:
                    outcomes.append(FanOutOutcome(backend.model_id, FAILED, error=str(exc)))
                else:
                    outcomes.append(FanOutOutcome(backend.model_id, OK, response=future.result()))
        return outcomes
    finally:
        # Stragglers past the deadline must not delay the caller; their
        # threads unwind on their own once the underlying call returns.
        pool.shutdown(wait=False, cancel_futures=True)


def fan_out(backends: list[Backend], request: ModelRequest, deadline_ms: float,
            quorum: int, clock=None) -> list[FanOutOutcome]:
    """Invoke all backends concurrently; succeed iff ok-count reaches quorum.

    Returns one outcome per backend, in backend order. Raises QuorumNotMet
    (carrying the full outcome list) when too few backends answered in time.
    """
    if not 1 <= quorum <= len(backends):
        raise ValueError(f"quorum {quorum} outside [1, {len(backends)}]")
    clock = clock or SystemClock()
    if getattr(clock, "simulated", False):
        outcomes, wall_ms = _simulated_fan_out(backends, request, deadline_ms)
        clock.advance_ms(wall_ms)
    else:
        outcomes = _threaded_fan_out(backends, request, deadline_ms)
    ok_count = sum(1 for o in outcomes if o.status == OK)
    if ok_count < quorum:
        failures = {o.model_id: o.error or o.status for o in outcomes if o.status != OK}
        raise QuorumNotMet(ok_count, quorum, failures, outcomes=outcomes)
    return outcomes
