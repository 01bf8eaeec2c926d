"""Regenerate the checked-in deterministic fixtures under tests/data/golden/.

Produces:
  - synthetic_bench.jsonl   20-case benchmark covering every scoring path
  - cassettes/*.jsonl       recorded model traffic for the replay run
  - config.json             replay engine config (cassette paths are relative
                            to the golden directory)
  - report.json             frozen benchmark report for the replay run
  - trace_happy.json        single-round trace: one objective, three tasks
  - trace_fault.json        two-round trace recovering from a tool fault

Rerun after any change that legitimately alters engine behavior, then review
the fixture diff like any other code change.
"""

from __future__ import annotations

import json
import os
import shutil
import sys
from pathlib import Path

from motionagents.agents.types import UserQuery
from motionagents.benchharness.datasets import load_dataset
from motionagents.benchharness.runner import run_benchmark
from motionagents.media import MediaRef
from motionagents.service.config import EngineConfig, build_bundle, load_config

ROOT = Path(__file__).resolve().parents[1]
GOLDEN = ROOT / "tests" / "data" / "golden"
SEED = 7

# Template analyzers echo "analysis of <media_id>: ... (<question>)", and the
# template generator passes that through, so truths placed inside the question
# come back correct while foreign truths do not; the first digit in a motion
# id becomes the parsed repetition count.
BENCH_CASES = [
    # body: both correct
    {"id": "mv-body-1", "category": "body", "motion_id": "wavecl",
     "query": "Confirm the person raises both arms overhead.",
     "truth": {"kind": "text", "answer": "raises both arms overhead"}},
    {"id": "mv-body-2", "category": "body", "motion_id": "kickcl",
     "query": "State whether the left leg kicks forward here.",
     "truth": {"kind": "text", "answer": "the left leg kicks forward"}},
    # seq: one correct, one wrong
    {"id": "mv-seq-1", "category": "seq", "motion_id": "stepcl",
     "query": "Verify the order: crouch first, then leap upward.",
     "truth": {"kind": "text", "answer": "crouch first then leap upward"}},
    {"id": "mv-seq-2", "category": "seq", "motion_id": "turncl",
     "query": "What follows the initial stretch?",
     "truth": {"kind": "text", "answer": "a slow backward roll"}},
    # dir: one correct, one wrong
    {"id": "mv-dir-1", "category": "dir", "motion_id": "slidecl",
     "query": "Check that the person moves toward the left wall.",
     "truth": {"kind": "text", "answer": "moves toward the left wall"}},
    {"id": "mv-dir-2", "category": "dir", "motion_id": "spincl",
     "query": "Which way does the torso rotate?",
     "truth": {"kind": "text", "answer": "clockwise from above"}},
    # rea: one correct, one partially overlapping (wrong but scored above 1)
    {"id": "mv-rea-1", "category": "rea", "motion_id": "liftcl",
     "query": "Explain why the knees bend before the lift.",
     "truth": {"kind": "text", "answer": "the knees bend before the lift"}},
    {"id": "mv-rea-2", "category": "rea", "motion_id": "reachcl",
     "query": "Why does the person reach out twice?",
     "truth": {"kind": "text", "answer": "the person tries to grab a rail"}},
    # hall: both wrong (resistance to invented details)
    {"id": "mv-hall-1", "category": "hall", "motion_id": "walkcl",
     "query": "Is anyone else visible in the scene?",
     "truth": {"kind": "text", "answer": "a second dancer enters"}},
    {"id": "mv-hall-2", "category": "hall", "motion_id": "standcl",
     "query": "Does the person hold any object?",
     "truth": {"kind": "text", "answer": "a red umbrella"}},
    # multiple choice (media-free: the engine echoes the query back)
    {"id": "mc-1", "category": "choice", "options": ["spin move", "back step"],
     "query": "The dancer finishes with a spin move.",
     "truth": {"kind": "choice", "answer_index": 0}},
    {"id": "mc-2", "category": "choice", "options": ["walk", "crawl"],
     "query": "b) the second option describes it best.",
     "truth": {"kind": "choice", "answer_index": 1}},
    {"id": "mc-3", "category": "choice", "options": ["squat", "lunge"],
     "query": "Pick the action shown: squat or lunge?",
     "truth": {"kind": "choice", "answer_index": 0}},
    # repetition counting (first digit of the motion id is the prediction)
    {"id": "rc-1", "category": "repcount", "motion_id": "set4",
     "query": "How many squats does the athlete complete?",
     "truth": {"kind": "count", "count": 4}},
    {"id": "rc-2", "category": "repcount", "motion_id": "set5",
     "query": "How many jumps are performed in total?",
     "truth": {"kind": "count", "count": 4}},
    {"id": "rc-3", "category": "repcount", "motion_id": "set9",
     "query": "Count the arm swings in the clip.",
     "truth": {"kind": "count", "count": 3}},
    {"id": "rc-4", "category": "repcount", "motion_id": "set2",
     "query": "How many push ups happen here?",
     "truth": {"kind": "count", "count": 2}},
    # free text, media-free
    {"id": "qa-1", "category": "qa",
     "query": "State plainly: the gymnast lands on both feet.",
     "truth": {"kind": "text", "answer": "lands on both feet"}},
    {"id": "qa-2", "category": "qa",
     "query": "Describe the throw.",
     "truth": {"kind": "text", "answer": "a long spiral pass"}},
    {"id": "qa-3", "category": "qa",
     "query": "Repeat after me: motion data is sparse.",
     "truth": {"kind": "text", "answer": "motion data is sparse"}},
]

CONFIDENCE = {
    "default": 0.5,
    "entries": [
        {"model_id": "analyzer-a", "modality": "motion", "confidence": 0.8},
        {"model_id": "analyzer-b", "modality": "motion", "confidence": 0.6},
    ],
}

SHARED_CONFIG = {
    "confidence": CONFIDENCE,
    "quorum": 2,
    "fanout_deadline_ms": 500.0,
    "clock": "simulated",
    "aggregation": "confidence",
    "max_rounds": 3,
    "tools": ["analyze_motion", "count_repetitions", "aggregate", "generate_answer"],
    "seed": SEED,
}


def _template(model_id: str, kind: str) -> dict:
    return {"transport": "template", "model_id": model_id, "kind": kind}


def _recording(model_id: str, kind: str, sink: str) -> dict:
    return {"transport": "recording", "inner": _template(model_id, kind), "sink": sink}


def _replay(model_id: str, kind: str, cassette: str) -> dict:
    return {"transport": "replay", "model_id": model_id, "kind": kind,
            "cassette": cassette}


def record_config() -> EngineConfig:
    return EngineConfig.from_dict({
        **SHARED_CONFIG,
        "reasoner": _recording("golden-reasoner", "reasoner", "cassettes/reasoner.jsonl"),
        "analyzers": [
            _recording("analyzer-a", "motion_specialist", "cassettes/analyzer_a.jsonl"),
            _recording("analyzer-b", "motion_specialist", "cassettes/analyzer_b.jsonl"),
        ],
        "judge": _recording("golden-judge", "judge", "cassettes/judge.jsonl"),
    })


def replay_config_dict() -> dict:
    return {
        **SHARED_CONFIG,
        "reasoner": _replay("golden-reasoner", "reasoner", "cassettes/reasoner.jsonl"),
        "analyzers": [
            _replay("analyzer-a", "motion_specialist", "cassettes/analyzer_a.jsonl"),
            _replay("analyzer-b", "motion_specialist", "cassettes/analyzer_b.jsonl"),
        ],
        "judge": _replay("golden-judge", "judge", "cassettes/judge.jsonl"),
    }


def write_dataset() -> Path:
    path = GOLDEN / "synthetic_bench.jsonl"
    path.write_text("\n".join(json.dumps(c, sort_keys=True) for c in BENCH_CASES) + "\n",
                    encoding="utf-8")
    return path


def run_bench(config: EngineConfig, cases) -> "BenchReport":
    bundle = build_bundle(config)
    return run_benchmark(cases, bundle.engine, judge=bundle.judge,
                         seed=config.seed, config_digest=config.fingerprint(),
                         backends=config.backend_kinds())


def write_traces() -> None:
    happy_bundle = build_bundle(EngineConfig.template_default())
    happy = happy_bundle.engine.run_turn(
        UserQuery(text="What is the person doing in this clip?",
                  attachments=(MediaRef("demo-clip", motion_path="demo-clip.npy"),)),
        turn_id="golden:0",
    )
    assert happy.final_status == "ok", happy.failure
    assert len(happy.rounds) == 1 and len(happy.rounds[0].outcomes) == 3
    (GOLDEN / "trace_happy.json").write_text(happy.to_json(), encoding="utf-8")

    fault_config = EngineConfig.from_dict({
        **EngineConfig.template_default().to_dict(),
        "tools": [
            "analyze_motion", "count_repetitions", "aggregate",
            {"name": "generate_answer", "fail_times": 1},
        ],
    })
    fault_bundle = build_bundle(fault_config)
    fault = fault_bundle.engine.run_turn(
        UserQuery(text="Summarize the routine in one line.",
                  attachments=(MediaRef("fault-clip", motion_path="fault-clip.npy"),)),
        turn_id="golden-fault:0",
    )
    assert fault.final_status == "ok", fault.failure
    assert len(fault.rounds) == 2
    (GOLDEN / "trace_fault.json").write_text(fault.to_json(), encoding="utf-8")


def main() -> int:
    GOLDEN.mkdir(parents=True, exist_ok=True)
    dataset = write_dataset()
    shutil.rmtree(GOLDEN / "cassettes", ignore_errors=True)

    cwd = os.getcwd()
    os.chdir(GOLDEN)  # cassette paths in the config are golden-dir relative
    try:
        cases = load_dataset(dataset, "cases")
        recorded = run_bench(record_config(), cases)

        (GOLDEN / "config.json").write_text(
            json.dumps(replay_config_dict(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8")
        config = load_config(GOLDEN / "config.json")
        replayed = run_bench(config, cases)
        if recorded.rows != replayed.rows:
            raise SystemExit("record and replay runs disagree; fixtures not written")
        (GOLDEN / "report.json").write_text(replayed.to_json(), encoding="utf-8")
    finally:
        os.chdir(cwd)

    write_traces()
    print(replayed.render_text())
    print(f"\nfixtures written to {GOLDEN}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
