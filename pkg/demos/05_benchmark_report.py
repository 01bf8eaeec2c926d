"""
Scoring the engine on a recorded benchmark
==========================================

A benchmark run sends every case in a dataset through the engine, grades
the answers (exact category accuracy, count-error statistics, a judged
1-to-5 score for free text), and folds everything into one report. Here
the model backends replay responses from recorded cassettes, so the run
is offline, fast, and reproduces the checked-in report byte for byte.
"""

import json
import os
from pathlib import Path

from motionagents.benchharness.datasets import load_dataset
from motionagents.benchharness.runner import run_benchmark
from motionagents.service.config import EngineConfig, build_bundle

golden = Path(__file__).resolve().parent.parent / "tests" / "data" / "golden"

# Cassette paths inside the config are relative to the fixture directory.
previous = os.getcwd()
os.chdir(golden)
try:
    config = EngineConfig.from_dict(json.loads((golden / "config.json").read_text()))
    bundle = build_bundle(config)
    cases = load_dataset(golden / "synthetic_bench.jsonl", "cases")
    report = run_benchmark(cases, bundle.engine, judge=bundle.judge,
                           seed=config.seed, config_digest=config.fingerprint(),
                           backends=config.backend_kinds())
finally:
    os.chdir(previous)

print(report.render_text())

# The same numbers, machine-readable. A frozen copy of this dict lives in
# the test fixtures; the acceptance suite diffs the bytes.
frozen = json.loads((golden / "report.json").read_text())
assert report.to_dict() == frozen
print("\nmatches the frozen report: confirmed")

# Per-case rows carry everything needed to audit a grade.
row = report.rows[0]
print(f"\nfirst row: case {row['case_id']} ({row['category']})"
      f" correct={row['correct']} score={row['score']}")
