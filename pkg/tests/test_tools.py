"""Standard tool handlers: wiring to services, payload shapes, fault injection."""

from __future__ import annotations

import pytest

from motionagents.agents.types import UserQuery
from motionagents.backends.base import BackendKind, ConfidenceTable, ModelRequest
from motionagents.backends.clock import SimulatedClock
from motionagents.backends.mock import MockBackend, MockScript, ScriptEntry
from motionagents.backends.template import TemplateBackend
from motionagents.media import MediaRef
from motionagents.motioncore.registry import ToolCall, UpstreamEntry
from motionagents.motioncore.retrieval import (
    KnowledgeBase,
    MotionStore,
    MotionStoreItem,
    Passage,
)
from motionagents.motioncore.tools import (
    STANDARD_TOOLS,
    ToolServices,
    build_standard_registry,
    failing_handler,
    payload_summary,
)

from conftest import make_mock

MEDIA = MediaRef("m1", motion_path="clip.npy")
QUERY = UserQuery(text="what is happening?", attachments=(MEDIA,))


def _call(capability, inputs=(), upstream=(), query=QUERY):
    return ToolCall(task_id="t1", capability=capability, query=query,
                    inputs=list(inputs), upstream=list(upstream))


def _analyzer(model_id, text, latency=10.0):
    script = MockScript()
    script.add("analysis", ScriptEntry(text=text, latency_ms=latency), loop=True)
    return MockBackend(model_id, BackendKind.MOTION_SPECIALIST, script)


def _services(**overrides) -> ToolServices:
    base = dict(
        reasoner=TemplateBackend("template-reasoner", BackendKind.REASONER),
        analyzers=[_analyzer("alpha", "a jump"), _analyzer("beta", "a hop")],
        confidence_table=ConfidenceTable(entries={("alpha", "motion"): 0.9,
                                                  ("beta", "motion"): 0.6}),
        clock=SimulatedClock(),
    )
    base.update(overrides)
    return ToolServices(**base)


def _handler(name, services):
    _, make_handler = STANDARD_TOOLS[name]
    return make_handler(services)


def test_payload_summary_per_kind():
    assert payload_summary({"kind": "aggregated", "final_text": "a jump"}) == "a jump"
    assert payload_summary({"kind": "scored_results", "results": [
        {"model_id": "a", "text": "low", "confidence": 0.1},
        {"model_id": "b", "text": "high", "confidence": 0.8},
    ]}) == "high"
    assert payload_summary({"kind": "retrieved", "items": [
        {"item_id": "i1", "label": "squat", "similarity": 0.9},
        {"item_id": "i2", "label": "lunge", "similarity": 0.8},
    ]}) == "similar motions: squat, lunge"
    assert payload_summary({"kind": "passages", "passages": [
        {"id": "p1", "title": "Squats", "text": "bend the knees", "score": 2},
    ]}) == "Squats: bend the knees"
    assert payload_summary({"kind": "answer", "text": "four"}) == "four"
    assert payload_summary({"kind": "mystery", "x": 1}) == str({"kind": "mystery", "x": 1})


def test_analysis_handler_returns_scored_results():
    handler = _handler("analyze_motion", _services())
    payload = handler(_call("analyze_motion",
                            inputs=[{"kind": "media", "ref": "m1", "resolved": MEDIA}]))
    assert payload == {"kind": "scored_results", "results": [
        {"model_id": "alpha", "text": "a jump", "confidence": 0.9},
        {"model_id": "beta", "text": "a hop", "confidence": 0.6},
    ]}


def test_analysis_handler_prefers_literal_question():
    analyzers = [_analyzer("alpha", "three")]
    services = _services(analyzers=analyzers)
    handler = _handler("count_repetitions", services)
    handler(_call("count_repetitions",
                  inputs=[{"kind": "media", "ref": "m1", "resolved": MEDIA},
                          {"kind": "literal", "value": "how many squats?"}]))
    assert analyzers[0].calls[0].payload["question"] == "how many squats?"


def test_analysis_handler_requires_media():
    handler = _handler("analyze_motion", _services())
    with pytest.raises(ValueError):
        handler(_call("analyze_motion", query=UserQuery(text="no media here")))


def test_aggregate_handler_flattens_upstream():
    handler = _handler("aggregate", _services())
    upstream = [
        UpstreamEntry(task_id="t1", tool_id="analyze_motion", payload={
            "kind": "scored_results",
            "results": [{"model_id": "alpha", "text": "a jump", "confidence": 0.9}],
        }),
        UpstreamEntry(task_id="t2", tool_id="analyze_motion", payload={
            "kind": "scored_results",
            "results": [{"model_id": "beta", "text": "a hop", "confidence": 0.6}],
        }),
    ]
    payload = handler(_call("aggregate", upstream=upstream))
    assert payload["kind"] == "aggregated"
    assert payload["final_text"] == "a jump"
    assert payload["method"] == "confidence_mechanism"


def test_aggregate_handler_requires_results():
    handler = _handler("aggregate", _services())
    with pytest.raises(ValueError):
        handler(_call("aggregate"))


def test_aggregate_handler_motion_aware_path():
    specialist = make_mock("spec", BackendKind.MOTION_SPECIALIST,
                           preliminary="a careful jump")
    reasoner = make_mock("r", refine="a refined jump")
    services = _services(aggregation="motion_aware", specialist=specialist,
                         reasoner=reasoner)
    handler = _handler("aggregate", services)
    upstream = [UpstreamEntry(task_id="t1", tool_id="analyze_motion", payload={
        "kind": "scored_results",
        "results": [{"model_id": "alpha", "text": "a jump", "confidence": 0.9}],
    })]
    payload = handler(_call("aggregate", upstream=upstream))
    assert payload["kind"] == "aggregated"
    assert payload["final_text"] == "a refined jump"
    assert payload["method"] == "motion_aware"


def test_aggregate_handler_motion_aware_needs_specialist_and_media():
    upstream = [UpstreamEntry(task_id="t1", tool_id="analyze_motion", payload={
        "kind": "scored_results",
        "results": [{"model_id": "alpha", "text": "a jump", "confidence": 0.9}],
    })]
    no_specialist = _handler("aggregate", _services(aggregation="motion_aware"))
    with pytest.raises(ValueError):
        no_specialist(_call("aggregate", upstream=upstream))

    specialist = make_mock("spec", BackendKind.MOTION_SPECIALIST, preliminary="x")
    handler = _handler("aggregate", _services(aggregation="motion_aware",
                                              specialist=specialist))
    with pytest.raises(ValueError):
        handler(_call("aggregate", upstream=upstream,
                      query=UserQuery(text="no media")))


def test_generate_handler_summarizes_upstream():
    reasoner = make_mock("r", generate="the person jumps twice")
    handler = _handler("generate_answer", _services(reasoner=reasoner))
    upstream = [
        UpstreamEntry(task_id="t1", tool_id="aggregate",
                      payload={"kind": "aggregated", "final_text": "a jump"}),
        UpstreamEntry(task_id="t2", tool_id="lookup_knowledge",
                      payload={"kind": "passages", "passages": [
                          {"id": "p", "title": "T", "text": "x", "score": 1}]}),
    ]
    payload = handler(_call("generate_answer", upstream=upstream))
    assert payload["kind"] == "answer"
    assert payload["text"] == "the person jumps twice"
    assert payload["sources"] == ["aggregate", "lookup_knowledge"]
    assert reasoner.calls[0].payload["entries"] == [
        {"source": "aggregate", "summary": "a jump"},
        {"source": "lookup_knowledge", "summary": "T: x"},
    ]


def test_generate_handler_seeds_query_when_no_upstream():
    reasoner = make_mock("r", generate="direct answer")
    handler = _handler("generate_answer", _services(reasoner=reasoner))
    payload = handler(_call("generate_answer"))
    assert payload["sources"] == ["query"]
    assert reasoner.calls[0].payload["entries"] == [
        {"source": "query", "summary": "what is happening?"}]


def _embed(embedder, text: str) -> tuple[float, ...]:
    response = embedder.invoke(ModelRequest(schema_tag="embed", payload={"texts": [text]}))
    return tuple(response.structured["vectors"][0])


def _store(embedder) -> MotionStore:
    store = MotionStore()
    for item_id, label in [("i1", "squat"), ("i2", "jumping jack"), ("i3", "lunge")]:
        store.add(MotionStoreItem(item_id=item_id, label=label,
                                  embedding=_embed(embedder, label),
                                  media=MediaRef(item_id, motion_path=f"{item_id}.npy")))
    return store


def test_retrieve_handler_finds_identical_label():
    embedder = TemplateBackend("template-embedder", BackendKind.EMBEDDER, embed_dim=32)
    services = _services(embedder=embedder, motion_store=_store(embedder), retrieval_k=2)
    handler = _handler("retrieve_motion", services)
    payload = handler(_call("retrieve_motion",
                            inputs=[{"kind": "literal", "value": "jumping jack"}]))
    assert payload["kind"] == "retrieved"
    assert payload["items"][0]["item_id"] == "i2"
    assert payload["items"][0]["similarity"] == 1.0
    assert len(payload["items"]) == 2


def test_retrieve_handler_requires_store_and_embedder():
    with pytest.raises(ValueError):
        _handler("retrieve_motion", _services())(_call("retrieve_motion"))
    embedder = TemplateBackend("template-embedder", BackendKind.EMBEDDER, embed_dim=32)
    services = _services(motion_store=_store(embedder))  # embedder still missing
    with pytest.raises(ValueError):
        _handler("retrieve_motion", services)(_call("retrieve_motion"))


def test_knowledge_handler_scores_passages():
    kb = KnowledgeBase([
        Passage("p1", "Jumping", "jumping jacks spread arms and legs"),
        Passage("p2", "Squatting", "squats bend the knees"),
    ])
    services = _services(knowledge_base=kb, knowledge_k=1)
    handler = _handler("lookup_knowledge", services)
    payload = handler(_call("lookup_knowledge",
                            inputs=[{"kind": "literal", "value": "how do jumping jacks work"}]))
    assert payload == {"kind": "passages", "passages": [
        {"id": "p1", "title": "Jumping", "text": "jumping jacks spread arms and legs",
         "score": 2}]}


def test_knowledge_handler_requires_kb():
    with pytest.raises(ValueError):
        _handler("lookup_knowledge", _services())(_call("lookup_knowledge"))


def test_failing_handler_counts_then_recovers():
    inner_calls = []

    def inner(call):
        inner_calls.append(call.task_id)
        return {"kind": "answer", "text": "ok"}

    wrapped = failing_handler(inner, fail_times=2)
    with pytest.raises(RuntimeError, match=r"injected tool failure \(call 1\)"):
        wrapped(_call("x"))
    with pytest.raises(RuntimeError, match=r"injected tool failure \(call 2\)"):
        wrapped(_call("x"))
    assert wrapped(_call("x")) == {"kind": "answer", "text": "ok"}
    assert inner_calls == ["t1"]

    always = failing_handler(inner, fail_times=-1, message="permanently down")
    for _ in range(3):
        with pytest.raises(RuntimeError, match="permanently down"):
            always(_call("x"))


def test_build_standard_registry_subset_and_faults():
    services = _services()
    registry = build_standard_registry(services,
                                       include=["analyze_motion", "generate_answer"],
                                       fail_specs={"analyze_motion": 1})
    assert [d.tool_id for d in registry.catalog().descriptors()] == [
        "analyze_motion", "generate_answer"]

    handler = registry.handler_for("analyze_motion")
    call = _call("analyze_motion",
                 inputs=[{"kind": "media", "ref": "m1", "resolved": MEDIA}])
    with pytest.raises(RuntimeError):
        handler(call)
    assert handler(call)["kind"] == "scored_results"

    with pytest.raises(KeyError):
        build_standard_registry(services, include=["not_a_tool"])


def test_build_standard_registry_full_set():
    registry = build_standard_registry(_services())
    assert [d.tool_id for d in registry.catalog().descriptors()] == [
        "analyze_motion", "count_repetitions", "aggregate",
        "generate_answer", "retrieve_motion", "lookup_knowledge",
    ]
