"""Config parsing, backend construction, and bundle assembly."""

from __future__ import annotations

import json

import pytest

from motionagents.backends.clock import SimulatedClock, SystemClock
from motionagents.backends.mock import MockBackend
from motionagents.backends.replay import RecordingBackend, ReplayBackend
from motionagents.backends.remote import RemoteBackend
from motionagents.backends.template import TemplateBackend
from motionagents.errors import ConfigInvalid
from motionagents.service.config import (
    STORAGE_ENV,
    EngineConfig,
    build_backend,
    build_bundle,
    load_config,
    resolve_storage_root,
)


def test_build_backend_template():
    backend = build_backend({"transport": "template", "model_id": "t",
                             "kind": "reasoner", "embed_dim": 16, "seed": 3})
    assert isinstance(backend, TemplateBackend)
    assert backend.model_id == "t"


def test_build_backend_mock_needs_script(tmp_path):
    with pytest.raises(ConfigInvalid, match="script"):
        build_backend({"transport": "mock", "model_id": "m"})
    script = tmp_path / "script.json"
    script.write_text(json.dumps({"generate": [{"text": "an answer"}]}),
                      encoding="utf-8")
    backend = build_backend({"transport": "mock", "model_id": "m",
                             "script": str(script)})
    assert isinstance(backend, MockBackend)


def test_build_backend_replay_and_recording(tmp_path):
    cassette = tmp_path / "cassette.jsonl"
    cassette.write_text("", encoding="utf-8")
    backend = build_backend({"transport": "replay", "model_id": "r",
                             "cassette": str(cassette)})
    assert isinstance(backend, ReplayBackend)

    recording = build_backend({
        "transport": "recording",
        "sink": str(tmp_path / "out.jsonl"),
        "inner": {"transport": "template", "model_id": "t"},
    })
    assert isinstance(recording, RecordingBackend)
    with pytest.raises(ConfigInvalid, match="sink"):
        build_backend({"transport": "recording",
                       "inner": {"transport": "template", "model_id": "t"}})


def test_build_backend_remote():
    backend = build_backend({"transport": "remote", "model_id": "gpt",
                             "endpoint": "https://models.example/v1"})
    assert isinstance(backend, RemoteBackend)
    with pytest.raises(ConfigInvalid, match="endpoint"):
        build_backend({"transport": "remote", "model_id": "gpt"})


def test_build_backend_rejects_bad_specs():
    with pytest.raises(ConfigInvalid, match="transport"):
        build_backend({"transport": "carrier-pigeon", "model_id": "x"})
    with pytest.raises(ConfigInvalid, match="model_id"):
        build_backend({"transport": "template"})
    with pytest.raises(ConfigInvalid, match="kind"):
        build_backend({"transport": "template", "model_id": "x", "kind": "oracle"})
    with pytest.raises(ConfigInvalid, match="object"):
        build_backend("not a dict")


def test_from_dict_rejects_unknown_keys():
    with pytest.raises(ConfigInvalid, match="unknown config keys: frobnicate"):
        EngineConfig.from_dict({"reasoner": {"transport": "template",
                                             "model_id": "t"},
                                "frobnicate": 1})


def test_from_dict_requires_reasoner():
    with pytest.raises(ConfigInvalid, match="reasoner"):
        EngineConfig.from_dict({})


@pytest.mark.parametrize("field,value,message", [
    ("aggregation", "vote", "aggregation"),
    ("clock", "sundial", "clock"),
    ("quorum", 0, "quorum"),
    ("fanout_deadline_ms", 0, "fanout_deadline_ms"),
    ("max_rounds", 0, "max_rounds"),
    ("tools", ["warp_tool"], "unknown tool"),
    ("tools", [42], "bad tools entry"),
])
def test_from_dict_field_validation(field, value, message):
    data = {"reasoner": {"transport": "template", "model_id": "t"}, field: value}
    with pytest.raises(ConfigInvalid, match=message):
        EngineConfig.from_dict(data)


def test_tools_entries_accept_names_and_fault_specs():
    config = EngineConfig.from_dict({
        "reasoner": {"transport": "template", "model_id": "t"},
        "tools": ["generate_answer", {"name": "analyze_motion", "fail_times": 2}],
    })
    assert config.tools == ("generate_answer",
                            {"name": "analyze_motion", "fail_times": 2})


def test_round_trip_and_fingerprint_stability(template_config):
    rebuilt = EngineConfig.from_dict(template_config.to_dict())
    assert rebuilt == template_config
    assert rebuilt.fingerprint() == template_config.fingerprint()

    reseeded = template_config.with_seed(99)
    assert reseeded.seed == 99
    assert reseeded.fingerprint() != template_config.fingerprint()


def test_load_config_errors(tmp_path):
    with pytest.raises(ConfigInvalid, match="cannot read"):
        load_config(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigInvalid, match="not valid JSON"):
        load_config(bad)
    good = tmp_path / "good.json"
    good.write_text(json.dumps(EngineConfig.template_default().to_dict()),
                    encoding="utf-8")
    assert load_config(good) == EngineConfig.template_default()


def test_build_bundle_wires_everything(template_config):
    bundle = build_bundle(template_config)
    assert bundle.config is template_config
    assert isinstance(bundle.services.reasoner, TemplateBackend)
    assert len(bundle.services.analyzers) == 1
    assert bundle.judge is not None
    assert isinstance(bundle.services.clock, SystemClock)
    # All six standard tools register by default.
    assert len(bundle.registry.catalog()) == 6
    assert bundle.engine.budget.max_rounds == 3


def test_build_bundle_simulated_clock_and_subset():
    config = EngineConfig.from_dict({
        "reasoner": {"transport": "template", "model_id": "t"},
        "clock": "simulated",
        "tools": ["generate_answer"],
        "max_rounds": 2,
    })
    bundle = build_bundle(config)
    assert isinstance(bundle.services.clock, SimulatedClock)
    assert [d.tool_id for d in bundle.registry.catalog().descriptors()] == [
        "generate_answer"]
    assert bundle.engine.budget.max_rounds == 2
    assert bundle.judge is None


def test_build_bundle_fault_injection_wraps_handler(template_config):
    config = EngineConfig.from_dict({
        **template_config.to_dict(),
        "tools": [{"name": "generate_answer", "fail_times": -1}],
    })
    bundle = build_bundle(config)
    from motionagents.agents.types import UserQuery
    trace = bundle.engine.run_turn(UserQuery(text="hello there"))
    assert trace.final_status == "failed"
    assert trace.failure["error"] == "RoundBudgetExhausted"


def test_build_bundle_loads_stores(tmp_path, template_config):
    from motionagents.backends.base import BackendKind, ModelRequest
    from motionagents.media import MediaRef
    from motionagents.motioncore.retrieval import (
        KnowledgeBase, MotionStore, MotionStoreItem, Passage)

    embedder = TemplateBackend("e", BackendKind.EMBEDDER, embed_dim=64)
    vec = embedder.invoke(ModelRequest(schema_tag="embed",
                                       payload={"texts": ["squat"]}))
    store = MotionStore()
    store.add(MotionStoreItem("i1", "squat", tuple(vec.structured["vectors"][0]),
                              MediaRef("i1", motion_path="i1.npy")))
    store.save(str(tmp_path / "store"))
    kb = KnowledgeBase([Passage("p1", "Squats", "bend the knees")])
    kb.save(str(tmp_path / "kb.jsonl"))

    config = EngineConfig.from_dict({
        **template_config.to_dict(),
        "motion_store_dir": str(tmp_path / "store"),
        "knowledge_file": str(tmp_path / "kb.jsonl"),
    })
    bundle = build_bundle(config)
    assert len(bundle.services.motion_store) == 1
    assert len(bundle.services.knowledge_base) == 1


def test_resolve_storage_root_precedence(monkeypatch, template_config):
    monkeypatch.delenv(STORAGE_ENV, raising=False)
    assert str(resolve_storage_root(template_config)) == "motionagents_data"

    monkeypatch.setenv(STORAGE_ENV, "/tmp/envroot")
    assert str(resolve_storage_root(template_config)) == "/tmp/envroot"

    config = EngineConfig.from_dict({**template_config.to_dict(),
                                     "storage_root": "/tmp/configroot"})
    assert str(resolve_storage_root(config)) == "/tmp/configroot"
