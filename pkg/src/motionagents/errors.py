"""Exception hierarchy shared across the engine, tool layer, backends, and service."""

from __future__ import annotations


class MotionAgentsError(Exception):
    """Base class for every error raised by this package."""


# --- planning / orchestration ---------------------------------------------

class EmptyCatalog(MotionAgentsError):
    """No tools are registered, so no plan can be grounded."""


class UndecomposableQuery(MotionAgentsError):
    """The reasoner could not produce a valid plan, even after one schema-repair retry."""


class NoToolAvailable(MotionAgentsError):
    """No registered tool advertises the requested capability."""

    def __init__(self, capability: str):
        super().__init__(f"no tool available for capability {capability!r}")
        self.capability = capability


class RoundBudgetExhausted(MotionAgentsError):
    """The plan/execute/verify loop ran out of rounds without an approved result."""


class PlanInvalid(MotionAgentsError):
    """A plan violated one or more structural invariants."""

    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = list(violations)


# --- tool layer ------------------------------------------------------------

class DuplicateToolId(MotionAgentsError):
    pass


class EmptyInput(MotionAgentsError):
    pass


class EmptyContext(MotionAgentsError):
    pass


class EmptyStore(MotionAgentsError):
    pass


class EmptyKnowledgeBase(MotionAgentsError):
    pass


class DimensionMismatch(MotionAgentsError):
    def __init__(self, expected: int, got: int):
        super().__init__(f"embedding dimension mismatch: store has {expected}, query has {got}")
        self.expected = expected
        self.got = got


class SpecialistFailure(MotionAgentsError):
    """Stage-1 (specialist) failure in motion-aware aggregation. Carries the cause."""

    def __init__(self, cause: Exception):
        super().__init__(f"specialist stage failed: {cause}")
        self.cause = cause


# --- backends --------------------------------------------------------------

class BackendError(MotionAgentsError):
    """Base for per-call backend failures.

    ``latency_ms`` is the simulated time at which the failure surfaced; fan-out
    uses it to order scripted failures against the deadline.
    """

    def __init__(self, message: str, latency_ms: float = 0.0):
        super().__init__(message)
        self.latency_ms = latency_ms


class Timeout(BackendError):
    """A single backend call exceeded its own transport timeout."""


class TransportError(BackendError):
    """Connection-level failure talking to a remote backend."""


class ScriptExhausted(BackendError):
    """A mock backend ran out of scripted responses for a schema tag."""


class CassetteMismatch(BackendError):
    """No recorded response matches the request fingerprint: code and cassette drifted."""


class SinkUnwritable(MotionAgentsError):
    pass


class ReasonerFailure(MotionAgentsError):
    """A reasoner-backed step failed. Carries the underlying backend error."""

    def __init__(self, cause: Exception, stage: str | None = None):
        where = f" during {stage}" if stage else ""
        super().__init__(f"reasoner failure{where}: {cause}")
        self.cause = cause
        self.stage = stage


class QuorumNotMet(MotionAgentsError):
    """Fewer successful responses than the required quorum.

    ``failures`` maps model_id to a short description of what went wrong;
    ``outcomes`` holds the full per-backend outcome list when available.
    """

    def __init__(self, ok: int, quorum: int, failures: dict[str, str], outcomes: list | None = None):
        detail = ", ".join(f"{m}: {why}" for m, why in sorted(failures.items()))
        super().__init__(f"quorum not met: {ok} ok < {quorum} required ({detail})")
        self.ok = ok
        self.quorum = quorum
        self.failures = dict(failures)
        self.outcomes = outcomes or []


# --- service ---------------------------------------------------------------

class StorageError(MotionAgentsError):
    pass


class SessionNotFound(MotionAgentsError):
    pass


class TurnNotFound(MotionAgentsError):
    pass


class MediaTooLarge(MotionAgentsError):
    pass


class Unauthorized(MotionAgentsError):
    pass


class ConfigInvalid(MotionAgentsError):
    pass


# --- benchmark harness -----------------------------------------------------

class UnknownFormat(MotionAgentsError):
    pass


class ValidationError(MotionAgentsError):
    """A dataset record failed validation. Carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class JudgeParseError(MotionAgentsError):
    pass


class LengthMismatch(MotionAgentsError):
    pass
