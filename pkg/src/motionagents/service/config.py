"""Engine configuration: JSON file to assembled engine, backends, and tools."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from ..agents.engine import Engine, ExecutionBudget
from ..backends.base import Backend, BackendKind, ConfidenceTable, canonical_json
from ..backends.clock import SimulatedClock, SystemClock
from ..backends.mock import MockBackend, MockScript
from ..backends.replay import RecordingBackend, ReplayBackend
from ..backends.remote import RemoteBackend
from ..backends.template import TemplateBackend
from ..errors import ConfigInvalid
from ..motioncore.registry import ToolRegistry
from ..motioncore.retrieval import KnowledgeBase, MotionStore
from ..motioncore.tools import STANDARD_TOOLS, ToolServices, build_standard_registry

STORAGE_ENV = "MOTIONAGENTS_STORAGE"

_TRANSPORTS = ("template", "mock", "replay", "remote", "recording")
_KINDS = {k.value for k in BackendKind}

_TOP_LEVEL_KEYS = {
    "reasoner", "analyzers", "specialist", "embedder", "judge",
    "confidence", "fanout_deadline_ms", "quorum", "aggregation",
    "aggregate_with_reasoner", "max_rounds", "planner_attempts", "tools",
    "motion_store_dir", "knowledge_file", "retrieval_k", "knowledge_k",
    "seed", "clock", "prompts", "storage_root", "admin_token",
    "select_with_reasoner",
}


def build_backend(spec: dict, default_seed: int = 0) -> Backend:
    """Instantiate one backend from its JSON spec."""
    if not isinstance(spec, dict):
        raise ConfigInvalid(f"backend spec must be an object, got {type(spec).__name__}")
    transport = spec.get("transport")
    if transport not in _TRANSPORTS:
        raise ConfigInvalid(
            f"unknown transport {transport!r}; expected one of {', '.join(_TRANSPORTS)}")
    if transport == "recording":
        inner = build_backend(spec.get("inner", {}), default_seed)
        sink = spec.get("sink")
        if not sink:
            raise ConfigInvalid("recording backend needs a 'sink' path")
        return RecordingBackend(inner, sink)

    model_id = spec.get("model_id")
    if not model_id:
        raise ConfigInvalid(f"{transport} backend needs a 'model_id'")
    kind_name = spec.get("kind", BackendKind.REASONER.value)
    if kind_name not in _KINDS:
        raise ConfigInvalid(f"unknown backend kind {kind_name!r}")
    kind = BackendKind(kind_name)

    if transport == "template":
        return TemplateBackend(model_id, kind,
                               embed_dim=int(spec.get("embed_dim", 64)),
                               seed=int(spec.get("seed", default_seed)))
    if transport == "mock":
        script_path = spec.get("script")
        if not script_path:
            raise ConfigInvalid("mock backend needs a 'script' file path")
        return MockBackend(model_id, kind, MockScript.from_file(script_path))
    if transport == "replay":
        cassette = spec.get("cassette")
        if not cassette:
            raise ConfigInvalid("replay backend needs a 'cassette' file path")
        return ReplayBackend(model_id, kind, cassette)
    endpoint = spec.get("endpoint")
    if not endpoint:
        raise ConfigInvalid("remote backend needs an 'endpoint' URL")
    return RemoteBackend(model_id, kind, endpoint,
                         timeout_s=float(spec.get("timeout_s", 30.0)),
                         auth_env=spec.get("auth_env"))


@dataclass(frozen=True)
class EngineConfig:
    """Parsed, validated engine configuration."""

    reasoner: dict
    analyzers: tuple = ()
    specialist: dict | None = None
    embedder: dict | None = None
    judge: dict | None = None
    confidence: dict = field(default_factory=dict)
    fanout_deadline_ms: float = 1000.0
    quorum: int = 1
    aggregation: str = "confidence"
    aggregate_with_reasoner: bool = False
    max_rounds: int = 3
    planner_attempts: int = 2
    tools: tuple | None = None
    motion_store_dir: str | None = None
    knowledge_file: str | None = None
    retrieval_k: int = 3
    knowledge_k: int = 3
    seed: int = 0
    clock: str = "system"
    prompts: dict = field(default_factory=dict)
    storage_root: str | None = None
    admin_token: str | None = None
    select_with_reasoner: bool = True

    @classmethod
    def from_dict(cls, data: dict) -> "EngineConfig":
        if not isinstance(data, dict):
            raise ConfigInvalid("config root must be a JSON object")
        unknown = set(data) - _TOP_LEVEL_KEYS
        if unknown:
            raise ConfigInvalid(f"unknown config keys: {', '.join(sorted(unknown))}")
        if "reasoner" not in data:
            raise ConfigInvalid("config needs a 'reasoner' backend spec")
        aggregation = data.get("aggregation", "confidence")
        if aggregation not in ("confidence", "motion_aware"):
            raise ConfigInvalid(
                f"aggregation must be 'confidence' or 'motion_aware', got {aggregation!r}")
        clock = data.get("clock", "system")
        if clock not in ("system", "simulated"):
            raise ConfigInvalid(f"clock must be 'system' or 'simulated', got {clock!r}")
        quorum = int(data.get("quorum", 1))
        if quorum < 1:
            raise ConfigInvalid("quorum must be at least 1")
        deadline = float(data.get("fanout_deadline_ms", 1000.0))
        if deadline <= 0:
            raise ConfigInvalid("fanout_deadline_ms must be positive")
        max_rounds = int(data.get("max_rounds", 3))
        if max_rounds < 1:
            raise ConfigInvalid("max_rounds must be at least 1")
        tools = data.get("tools")
        if tools is not None:
            parsed_tools = []
            for entry in tools:
                if isinstance(entry, str):
                    name = entry
                    parsed_tools.append(entry)
                elif isinstance(entry, dict) and "name" in entry:
                    name = entry["name"]
                    parsed_tools.append({"name": name,
                                         "fail_times": int(entry.get("fail_times", 0))})
                else:
                    raise ConfigInvalid(f"bad tools entry: {entry!r}")
                if name not in STANDARD_TOOLS:
                    raise ConfigInvalid(f"unknown tool {name!r}")
            tools = tuple(
                t if isinstance(t, str) else dict(t) for t in parsed_tools)
        try:
            return cls(
                reasoner=dict(data["reasoner"]),
                analyzers=tuple(dict(a) for a in data.get("analyzers", [])),
                specialist=data.get("specialist"),
                embedder=data.get("embedder"),
                judge=data.get("judge"),
                confidence=dict(data.get("confidence", {})),
                fanout_deadline_ms=deadline,
                quorum=quorum,
                aggregation=aggregation,
                aggregate_with_reasoner=bool(data.get("aggregate_with_reasoner", False)),
                max_rounds=max_rounds,
                planner_attempts=int(data.get("planner_attempts", 2)),
                tools=tools,
                motion_store_dir=data.get("motion_store_dir"),
                knowledge_file=data.get("knowledge_file"),
                retrieval_k=int(data.get("retrieval_k", 3)),
                knowledge_k=int(data.get("knowledge_k", 3)),
                seed=int(data.get("seed", 0)),
                clock=clock,
                prompts=dict(data.get("prompts", {})),
                storage_root=data.get("storage_root"),
                admin_token=data.get("admin_token"),
                select_with_reasoner=bool(data.get("select_with_reasoner", True)),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigInvalid(f"bad config value: {exc}")

    @classmethod
    def template_default(cls, seed: int = 0) -> "EngineConfig":
        """All-template config: runs end to end with no model dependencies."""
        return cls(
            reasoner={"transport": "template", "model_id": "template-reasoner",
                      "kind": "reasoner"},
            analyzers=(
                {"transport": "template", "model_id": "template-analyzer",
                 "kind": "motion_specialist"},
            ),
            specialist={"transport": "template", "model_id": "template-specialist",
                        "kind": "motion_specialist"},
            embedder={"transport": "template", "model_id": "template-embedder",
                      "kind": "embedder"},
            judge={"transport": "template", "model_id": "template-judge",
                   "kind": "judge"},
            seed=seed,
        )

    def to_dict(self) -> dict:
        return {
            "reasoner": self.reasoner,
            "analyzers": list(self.analyzers),
            "specialist": self.specialist,
            "embedder": self.embedder,
            "judge": self.judge,
            "confidence": self.confidence,
            "fanout_deadline_ms": self.fanout_deadline_ms,
            "quorum": self.quorum,
            "aggregation": self.aggregation,
            "aggregate_with_reasoner": self.aggregate_with_reasoner,
            "max_rounds": self.max_rounds,
            "planner_attempts": self.planner_attempts,
            "tools": list(self.tools) if self.tools is not None else None,
            "motion_store_dir": self.motion_store_dir,
            "knowledge_file": self.knowledge_file,
            "retrieval_k": self.retrieval_k,
            "knowledge_k": self.knowledge_k,
            "seed": self.seed,
            "clock": self.clock,
            "prompts": self.prompts,
            "storage_root": self.storage_root,
            "admin_token": self.admin_token,
            "select_with_reasoner": self.select_with_reasoner,
        }

    def fingerprint(self) -> str:
        return hashlib.sha256(canonical_json(self.to_dict()).encode("utf-8")).hexdigest()

    def backend_kinds(self) -> dict:
        """Transport per model role, recorded in benchmark reports."""
        kinds = {
            "reasoner": self.reasoner.get("transport"),
            "analyzers": [a.get("transport") for a in self.analyzers],
        }
        for role in ("specialist", "embedder", "judge"):
            spec = getattr(self, role)
            if spec is not None:
                kinds[role] = spec.get("transport")
        return kinds

    def with_seed(self, seed: int) -> "EngineConfig":
        return EngineConfig.from_dict({**self.to_dict(), "seed": seed})


def load_config(path: str | Path) -> EngineConfig:
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ConfigInvalid(f"cannot read config {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigInvalid(f"config {path} is not valid JSON: {exc.msg}")
    return EngineConfig.from_dict(data)


@dataclass
class EngineBundle:
    """Everything assembled from one config."""

    config: EngineConfig
    engine: Engine
    services: ToolServices
    registry: ToolRegistry
    judge: Backend | None


def build_bundle(config: EngineConfig) -> EngineBundle:
    reasoner = build_backend(config.reasoner, config.seed)
    analyzers = [build_backend(spec, config.seed) for spec in config.analyzers]
    specialist = build_backend(config.specialist, config.seed) if config.specialist else None
    embedder = build_backend(config.embedder, config.seed) if config.embedder else None
    judge = build_backend(config.judge, config.seed) if config.judge else None

    clock = SimulatedClock() if config.clock == "simulated" else SystemClock()
    motion_store = None
    if config.motion_store_dir:
        motion_store = MotionStore.load(config.motion_store_dir)
    knowledge_base = None
    if config.knowledge_file:
        knowledge_base = KnowledgeBase.load(config.knowledge_file)

    services = ToolServices(
        reasoner=reasoner,
        analyzers=analyzers,
        specialist=specialist,
        embedder=embedder,
        confidence_table=ConfidenceTable.from_dict(config.confidence),
        fanout_deadline_ms=config.fanout_deadline_ms,
        quorum=config.quorum,
        clock=clock,
        aggregation=config.aggregation,
        aggregate_with_reasoner=config.aggregate_with_reasoner,
        motion_store=motion_store,
        knowledge_base=knowledge_base,
        retrieval_k=config.retrieval_k,
        knowledge_k=config.knowledge_k,
    )
    if config.prompts:
        services.prompts.update(config.prompts)

    include = None
    fail_specs: dict[str, int] = {}
    if config.tools is not None:
        include = []
        for entry in config.tools:
            if isinstance(entry, str):
                include.append(entry)
            else:
                include.append(entry["name"])
                if entry.get("fail_times"):
                    fail_specs[entry["name"]] = entry["fail_times"]
    registry = build_standard_registry(services, include=include,
                                       fail_specs=fail_specs or None)

    engine = Engine(
        reasoner=reasoner,
        registry=registry,
        services=services,
        budget=ExecutionBudget(max_rounds=config.max_rounds,
                               planner_attempts=config.planner_attempts),
        prompts=services.prompts,
        select_with_reasoner=config.select_with_reasoner,
    )
    return EngineBundle(config=config, engine=engine, services=services,
                        registry=registry, judge=judge)


def resolve_storage_root(config: EngineConfig) -> Path:
    """Config value, then the environment override, then a local default."""
    root = config.storage_root or os.environ.get(STORAGE_ENV) or "motionagents_data"
    return Path(root)
