"""Command line interface: exit codes, trace files, benchmark reports."""

from __future__ import annotations

import hashlib
import json

import pytest
from fastapi.testclient import TestClient

from motionagents.service.app import create_app
from motionagents.service.cli import main
from motionagents.service.config import EngineConfig, build_bundle
from motionagents.service.storage import SessionStore


def test_run_writes_trace_and_prints_answer(tmp_path, capsys):
    trace_path = tmp_path / "trace.json"
    code = main(["run", "--query", "What does the person do?",
                 "--trace", str(trace_path)])
    assert code == 0
    out = capsys.readouterr().out
    trace = json.loads(trace_path.read_text())
    assert trace["final_status"] == "ok"
    assert trace["turn_id"] == "local:0"
    assert trace["answer"] == out.strip()
    assert trace["rounds"][0]["plan"]["version"] == 1


def test_run_with_media_attaches_content_hash(tmp_path, capsys):
    clip = tmp_path / "clip.npy"
    clip.write_bytes(b"synthetic motion frames")
    digest = hashlib.sha256(b"synthetic motion frames").hexdigest()
    trace_path = tmp_path / "trace.json"
    code = main(["run", "--query", "Describe the motion.",
                 "--media", str(clip), "--trace", str(trace_path)])
    assert code == 0
    trace = json.loads(trace_path.read_text())
    assert trace["query"]["attachments"] == [
        {"media_id": digest, "modality": "motion"}]
    capsys.readouterr()


def test_run_missing_media_file(tmp_path, capsys):
    code = main(["run", "--query", "hi", "--media", str(tmp_path / "nope.npy")])
    assert code == 2
    assert "media file not found" in capsys.readouterr().err


def test_run_exhausted_budget_exits_one(tmp_path, capsys):
    config = EngineConfig.template_default().to_dict()
    config["tools"] = [{"name": "generate_answer", "fail_times": -1}]
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps(config))
    code = main(["run", "--query", "hello", "--config", str(config_path)])
    assert code == 1
    err = capsys.readouterr().err
    assert "turn failed: RoundBudgetExhausted:" in err


def test_bad_config_exits_two(tmp_path, capsys):
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps({"max_rounds": 0}))
    code = main(["run", "--query", "hi", "--config", str(config_path)])
    assert code == 2
    assert "invalid input:" in capsys.readouterr().err

    code = main(["run", "--query", "hi", "--config", str(tmp_path / "ghost.json")])
    assert code == 2


def test_bench_writes_report(tmp_path, capsys):
    dataset = tmp_path / "cases.jsonl"
    lines = [
        {"id": "c1", "query": "Does the person wave at the crowd?",
         "truth": {"kind": "text", "answer": "wave"}},
        {"id": "c2", "query": "How many actions happen?",
         "truth": {"kind": "count", "count": 2}},
    ]
    dataset.write_text("\n".join(json.dumps(line) for line in lines))
    report_path = tmp_path / "report.json"
    code = main(["bench", "--dataset", str(dataset),
                 "--report", str(report_path)])
    assert code == 0
    out = capsys.readouterr().out
    assert "benchmark report: 2 cases" in out
    report = json.loads(report_path.read_text())
    assert report["total"] == 2
    assert report["failures"] == 0


def test_bench_invalid_dataset_exits_two(tmp_path, capsys):
    dataset = tmp_path / "cases.jsonl"
    dataset.write_text(json.dumps({"id": "c1"}))  # missing query
    code = main(["bench", "--dataset", str(dataset)])
    assert code == 2
    assert "invalid input:" in capsys.readouterr().err


def test_missing_subcommand_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
    capsys.readouterr()


def test_cli_and_http_traces_are_byte_identical(tmp_path, capsys):
    clip = tmp_path / "clip.npy"
    clip.write_bytes(b"twin motion payload")
    trace_path = tmp_path / "trace.json"
    code = main(["run", "--query", "Describe the motion.",
                 "--media", str(clip), "--session-id", "twin",
                 "--trace", str(trace_path)])
    assert code == 0
    capsys.readouterr()

    bundle = build_bundle(EngineConfig.template_default())
    store = SessionStore(tmp_path / "data")
    client = TestClient(create_app(bundle, store))
    client.post("/sessions", json={"session_id": "twin"})
    with clip.open("rb") as handle:
        client.post("/sessions/twin/turns",
                    data={"query": "Describe the motion."},
                    files=[("media", ("clip.npy", handle, "x"))])
    http_bytes = client.get("/sessions/twin/turns/0/trace").content
    assert http_bytes == trace_path.read_bytes()
    store.close()
