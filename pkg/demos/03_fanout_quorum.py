"""
Fan-out under a deadline, on a simulated clock
==============================================

The engine queries every analysis model at once and waits at most one
deadline for the whole group. Models that answer in time count toward a
quorum; slow ones are marked timed out, crashed ones failed. Scripted
mock backends plus a simulated clock make the timeline exact and
repeatable, so we can watch the bookkeeping without real latency.
"""

from motionagents.backends.base import BackendKind, ModelRequest, Schema
from motionagents.backends.clock import SimulatedClock
from motionagents.backends.fanout import fan_out
from motionagents.backends.mock import MockBackend, MockScript, ScriptEntry
from motionagents.errors import QuorumNotMet

DEADLINE_MS = 400.0


def analyzer(model_id, latency_ms, error=None):
    script = MockScript()
    if error:
        entry = ScriptEntry(error="transport", error_message=error, latency_ms=latency_ms)
    else:
        entry = ScriptEntry(text=f"{model_id} sees a squat", latency_ms=latency_ms)
    script.add(Schema.ANALYSIS, entry, loop=True)
    return MockBackend(model_id, BackendKind.VIDEO_SPECIALIST, script)


request = ModelRequest(schema_tag=Schema.ANALYSIS, payload={"question": "what happens?"})

# fast and steady answer in time; sluggish replies 200ms past the deadline;
# flaky crashes immediately.
backends = [
    analyzer("fast", 120.0),
    analyzer("steady", 390.0),
    analyzer("sluggish", 600.0),
    analyzer("flaky", 50.0, error="connection reset"),
]

clock = SimulatedClock()
outcomes = fan_out(backends, request, deadline_ms=DEADLINE_MS, quorum=2, clock=clock)
print(f"deadline {DEADLINE_MS:.0f}ms, quorum 2:")
for o in outcomes:
    print(f"  {o.model_id:<9} {o.status:<9} {o.error or o.response.text}")

# The group waited for sluggish right up to the deadline and no longer;
# a straggler can cost at most the deadline, never more.
print(f"elapsed on the simulated clock: {clock.now_ms():.0f}ms")

# Demand more survivors than the timeline allows and the same run fails
# loudly, with the per-backend post-mortem attached.
clock = SimulatedClock()
try:
    fan_out(backends, request, deadline_ms=DEADLINE_MS, quorum=3, clock=clock)
except QuorumNotMet as exc:
    print(f"\nquorum 3: {exc}")
    for model_id, reason in sorted(exc.failures.items()):
        print(f"  {model_id}: {reason}")
