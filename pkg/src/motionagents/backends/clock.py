"""Clocks: real monotonic time for production, a manually advanced one for tests."""

from __future__ import annotations

import time


class SystemClock:
    simulated = False

    def now_ms(self) -> float:
        return time.monotonic() * 1000.0


class SimulatedClock:
    """A clock that only moves when told to.

    Fan-out advances it by the simulated wall time of each call, so timing
    properties can be asserted without sleeping.
    """

    simulated = True

    def __init__(self, start_ms: float = 0.0):
        self._now_ms = start_ms

    def now_ms(self) -> float:
        return self._now_ms

    def advance_ms(self, delta_ms: float) -> None:
        if delta_ms < 0:
            raise ValueError("cannot move a clock backwards")
        self._now_ms += delta_ms
