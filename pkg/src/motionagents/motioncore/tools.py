"""The standard tool set: descriptors plus handlers wired to engine services."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from ..backends.base import Backend, ConfidenceTable, ModelRequest, Schema
from ..prompts import DEFAULT_PROMPTS
from .aggregate import aggregate_confidence, aggregate_motion_aware
from .analyzer import AnalysisRequest, ScoredResult, analyze
from .generate import ContextEntry, GenerationContext, generate_answer
from .registry import CostHint, ToolCall, ToolDescriptor, ToolRegistry
from .retrieval import KnowledgeBase, MotionStore, lookup_knowledge, retrieve_motion


@dataclass
class ToolServices:
    """Shared engine facilities the standard tools draw on."""

    reasoner: Backend
    analyzers: list[Backend] = field(default_factory=list)
    specialist: Backend | None = None
    embedder: Backend | None = None
    confidence_table: ConfidenceTable = field(default_factory=ConfidenceTable)
    fanout_deadline_ms: float = 1000.0
    quorum: int = 1
    clock: object = None
    aggregation: str = "confidence"
    aggregate_with_reasoner: bool = False
    motion_store: MotionStore | None = None
    knowledge_base: KnowledgeBase | None = None
    retrieval_k: int = 3
    knowledge_k: int = 3
    prompts: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_PROMPTS))

    def embed_text(self, text: str) -> list[float]:
        if self.embedder is None:
            raise ValueError("no embedder configured")
        response = self.embedder.invoke(
            ModelRequest(schema_tag=Schema.EMBED, payload={"texts": [text]})
        )
        return response.structured["vectors"][0]


def _question_for(call: ToolCall) -> str:
    literals = [v for v in call.literals() if isinstance(v, str) and v.strip()]
    return literals[0] if literals else call.query.text


def _scored_results_from_upstream(call: ToolCall) -> list[ScoredResult]:
    results: list[ScoredResult] = []
    for entry in call.upstream:
        if entry.payload.get("kind") == "scored_results":
            results.extend(ScoredResult.from_dict(r) for r in entry.payload["results"])
    return results


def payload_summary(payload: dict) -> str:
    """One-line summary of a tool payload, used to build generation context."""
    kind = payload.get("kind")
    if kind == "aggregated":
        return payload["final_text"]
    if kind == "scored_results":
        results = [ScoredResult.from_dict(r) for r in payload["results"]]
        best = max(results, key=lambda r: (r.confidence, r.text))
        return best.text
    if kind == "retrieved":
        labels = ", ".join(item["label"] for item in payload["items"])
        return f"similar motions: {labels}"
    if kind == "passages":
        lines = [f"{p['title']}: {p['text']}" for p in payload["passages"]]
        return " | ".join(lines)
    if kind == "answer":
        return payload["text"]
    return str(payload)


def _analysis_handler(services: ToolServices) -> Callable[[ToolCall], dict]:
    def handler(call: ToolCall) -> dict:
        media = call.first_media()
        if media is None:
            raise ValueError("no media attached to the query")
        request = AnalysisRequest(media=media, question=_question_for(call))
        results = analyze(
            request,
            services.analyzers,
            services.confidence_table,
            services.fanout_deadline_ms,
            services.quorum,
            clock=services.clock,
            role_prompt=services.prompts.get("analysis", ""),
        )
        return {"kind": "scored_results", "results": [r.to_dict() for r in results]}

    return handler


def _aggregate_handler(services: ToolServices) -> Callable[[ToolCall], dict]:
    def handler(call: ToolCall) -> dict:
        results = _scored_results_from_upstream(call)
        if not results:
            raise ValueError("no scored results available to aggregate")
        if services.aggregation == "motion_aware":
            if services.specialist is None:
                raise ValueError("motion-aware aggregation needs a specialist backend")
            media = call.first_media() or (
                call.query.attachments[0] if call.query.attachments else None
            )
            if media is None:
                raise ValueError("motion-aware aggregation needs the raw media")
            aggregated = aggregate_motion_aware(
                results,
                media,
                services.specialist,
                services.reasoner,
                specialist_prompt=services.prompts.get("preliminary", ""),
                reasoner_prompt=services.prompts.get("refine", ""),
            )
        else:
            reasoner = services.reasoner if services.aggregate_with_reasoner else None
            aggregated = aggregate_confidence(
                results, reasoner=reasoner, role_prompt=services.prompts.get("aggregate", "")
            )
        return {"kind": "aggregated", **aggregated.to_dict()}

    return handler


def _generate_handler(services: ToolServices) -> Callable[[ToolCall], dict]:
    def handler(call: ToolCall) -> dict:
        entries = tuple(
            ContextEntry(source=entry.tool_id, payload=payload_summary(entry.payload))
            for entry in call.upstream
        )
        if not entries:
            # A plan may route straight to generation; the query is then the
            # only context there is.
            entries = (ContextEntry(source="query", payload=call.query.text),)
        context = GenerationContext(entries=entries, query=call.query)
        answer = generate_answer(context, services.reasoner,
                                 role_prompt=services.prompts.get("generate", ""))
        return {"kind": "answer", **answer.to_dict()}

    return handler


def _retrieve_handler(services: ToolServices) -> Callable[[ToolCall], dict]:
    def handler(call: ToolCall) -> dict:
        if services.motion_store is None:
            raise ValueError("no motion store configured")
        embedding = services.embed_text(_question_for(call))
        ranked = retrieve_motion(embedding, services.motion_store, services.retrieval_k)
        return {
            "kind": "retrieved",
            "items": [
                {"item_id": item.item_id, "label": item.label, "similarity": round(sim, 6)}
                for item, sim in ranked
            ],
        }

    return handler


def _knowledge_handler(services: ToolServices) -> Callable[[ToolCall], dict]:
    def handler(call: ToolCall) -> dict:
        if services.knowledge_base is None:
            raise ValueError("no knowledge base configured")
        ranked = lookup_knowledge(_question_for(call), services.knowledge_base,
                                  services.knowledge_k)
        return {
            "kind": "passages",
            "passages": [
                {"id": p.passage_id, "title": p.title, "text": p.text, "score": score}
                for p, score in ranked
            ],
        }

    return handler


STANDARD_TOOLS: dict[str, tuple[ToolDescriptor, Callable[[ToolServices], Callable]]] = {
    "analyze_motion": (
        ToolDescriptor(
            tool_id="analyze_motion",
            capabilities=frozenset({"analyze_motion"}),
            description="Analyze human motion or video with the full model ensemble.",
            input_schema={"media": "media_ref", "question": "text"},
            cost_hint=CostHint.MULTI_MODEL_CALL,
        ),
        _analysis_handler,
    ),
    "count_repetitions": (
        ToolDescriptor(
            tool_id="count_repetitions",
            capabilities=frozenset({"count_repetitions"}),
            description="Count repeated movements in the input media via the model ensemble.",
            input_schema={"media": "media_ref", "question": "text"},
            cost_hint=CostHint.MULTI_MODEL_CALL,
        ),
        _analysis_handler,
    ),
    "aggregate": (
        ToolDescriptor(
            tool_id="aggregate",
            capabilities=frozenset({"aggregate"}),
            description="Fuse multiple model analyses into one result.",
            input_schema={"results": "scored_results"},
            cost_hint=CostHint.MODEL_CALL,
        ),
        _aggregate_handler,
    ),
    "generate_answer": (
        ToolDescriptor(
            tool_id="generate_answer",
            capabilities=frozenset({"generate_answer"}),
            description="Compose the final user-facing answer from accumulated context.",
            input_schema={"context": "entries"},
            cost_hint=CostHint.MODEL_CALL,
        ),
        _generate_handler,
    ),
    "retrieve_motion": (
        ToolDescriptor(
            tool_id="retrieve_motion",
            capabilities=frozenset({"retrieve_motion"}),
            description="Vector search over the labeled motion store.",
            input_schema={"question": "text"},
            cost_hint=CostHint.CHEAP,
        ),
        _retrieve_handler,
    ),
    "lookup_knowledge": (
        ToolDescriptor(
            tool_id="lookup_knowledge",
            capabilities=frozenset({"lookup_knowledge"}),
            description="Query the domain knowledge base for relevant passages.",
            input_schema={"question": "text"},
            cost_hint=CostHint.CHEAP,
        ),
        _knowledge_handler,
    ),
}


def failing_handler(inner: Callable[[ToolCall], dict], fail_times: int,
                    message: str = "injected tool failure") -> Callable[[ToolCall], dict]:
    """Fault-injection wrapper: fail the first ``fail_times`` calls (-1 = always)."""
    state = {"calls": 0}

    def handler(call: ToolCall) -> dict:
        state["calls"] += 1
        if fail_times < 0 or state["calls"] <= fail_times:
            raise RuntimeError(f"{message} (call {state['calls']})")
        return inner(call)

    return handler


def build_standard_registry(services: ToolServices,
                            include: list[str] | None = None,
                            fail_specs: dict[str, int] | None = None) -> ToolRegistry:
    """Registry holding the standard tools, optionally subset and fault-injected."""
    registry = ToolRegistry()
    names = include if include is not None else list(STANDARD_TOOLS)
    for name in names:
        if name not in STANDARD_TOOLS:
            raise KeyError(f"unknown standard tool {name!r}")
        descriptor, make_handler = STANDARD_TOOLS[name]
        handler = make_handler(services)
        if fail_specs and name in fail_specs:
            handler = failing_handler(handler, fail_specs[name])
        registry.register(descriptor, handler)
    return registry
