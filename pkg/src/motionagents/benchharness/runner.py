"""Benchmark execution: run cases through an engine and score the answers."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from ..agents.engine import Engine
from ..agents.types import FINAL_OK, UserQuery
from ..backends.base import Backend, canonical_json
from .datasets import (
    BenchCase,
    MOVID_CATEGORIES,
    TRUTH_CHOICE,
    TRUTH_COUNT,
    TRUTH_TEXT,
)
from .judging import eval_multiple_choice, heuristic_judge, judge_answer
from .metrics import repcount_metrics

_FIRST_INT = re.compile(r"-?\d+")


@dataclass(frozen=True)
class BenchReport:
    """Scored results for one benchmark run, serializable byte-for-byte."""

    total: int
    seed: int
    config_digest: str
    rows: tuple[dict, ...]
    category_accuracy: dict
    movid: dict | None
    repcount: dict | None
    mean_judge_score: float | None
    failures: int
    backends: dict | None = None

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "seed": self.seed,
            "config_digest": self.config_digest,
            "backends": self.backends,
            "category_accuracy": self.category_accuracy,
            "movid": self.movid,
            "repcount": self.repcount,
            "mean_judge_score": self.mean_judge_score,
            "failures": self.failures,
            "rows": list(self.rows),
        }

    def to_json(self) -> str:
        return canonical_json(self.to_dict())

    def render_text(self) -> str:
        lines = [f"benchmark report: {self.total} cases, seed {self.seed}"]
        if self.config_digest:
            lines.append(f"config digest: {self.config_digest[:12]}")
        lines.append("category accuracy:")
        for name in sorted(self.category_accuracy):
            stats = self.category_accuracy[name]
            lines.append(
                f"  {name:<10} {stats['accuracy']:.3f} "
                f"({stats['correct']}/{stats['n']})"
            )
        if self.movid is not None:
            cells = [f"{label.capitalize()} {self.movid[label]['acc']:.1f}"
                     f"/{self.movid[label]['score']:.1f}"
                     for label in (*MOVID_CATEGORIES, "all")]
            lines.append("motion video table: " + " | ".join(cells))
        if self.repcount is not None:
            lines.append(
                "repetition counting: "
                f"OBZ {self.repcount['obz']:.3f} OBO {self.repcount['obo']:.3f} "
                f"MAE {self.repcount['mae']:.3f} RMSE {self.repcount['rmse']:.3f}"
            )
        if self.mean_judge_score is not None:
            lines.append(f"mean judge score: {self.mean_judge_score:.3f}")
        lines.append(f"failed turns: {self.failures}")
        return "\n".join(lines)


def _score_case(case: BenchCase, predicted: str, judge: Backend | None) -> dict:
    row: dict = {
        "case_id": case.case_id,
        "category": case.category,
        "predicted": predicted,
        "correct": None,
        "score": None,
        "pred_count": None,
        "truth_count": None,
    }
    kind = case.truth["kind"]
    if kind == TRUTH_TEXT:
        reference = case.truth["answer"]
        row["expected"] = reference
        if judge is not None:
            result = judge_answer(predicted, reference, judge)
        else:
            result = heuristic_judge(predicted, reference)
        row["correct"] = result.correct
        row["score"] = result.score
    elif kind == TRUTH_CHOICE:
        expected = case.truth["answer_index"]
        row["expected"] = case.options[expected]
        matched = eval_multiple_choice(predicted, case.options)
        row["matched_index"] = matched
        row["correct"] = matched == expected
        # Choices have no judge; a 0-or-5 proxy keeps the score column uniform.
        row["score"] = 5 * int(row["correct"])
    else:
        truth_count = case.truth["count"]
        row["truth_count"] = truth_count
        match = _FIRST_INT.search(predicted)
        if match is None:
            # Unparseable counts score as zero so every case stays in the pool.
            row["pred_count"] = 0
            row["count_parse_failed"] = True
        else:
            row["pred_count"] = int(match.group())
        row["correct"] = row["pred_count"] == truth_count
    return row


def run_benchmark(cases: Sequence[BenchCase], engine: Engine,
                  judge: Backend | None = None, seed: int = 0,
                  config_digest: str = "",
                  backends: dict | None = None) -> BenchReport:
    """Run every case through the engine and score against ground truth."""
    rows: list[dict] = []
    failures = 0
    for index, case in enumerate(cases):
        attachments = (case.media,) if case.media is not None else ()
        query = UserQuery(text=case.query_text, attachments=attachments)
        trace = engine.run_turn(query, turn_id=f"bench:{index}")
        if trace.final_status == FINAL_OK:
            predicted = trace.answer or ""
        else:
            predicted = ""
            failures += 1
        row = _score_case(case, predicted, judge)
        row["turn_status"] = trace.final_status
        rows.append(row)

    category_stats: dict[str, dict] = {}
    for row in rows:
        stats = category_stats.setdefault(
            row["category"], {"n": 0, "correct": 0, "accuracy": 0.0})
        stats["n"] += 1
        if row["correct"]:
            stats["correct"] += 1
    for stats in category_stats.values():
        stats["accuracy"] = stats["correct"] / stats["n"]

    movid = None
    if any(cat in category_stats for cat in MOVID_CATEGORIES):
        movid = {}
        pooled_n = pooled_correct = 0
        pooled_scores: list[float] = []
        for cat in MOVID_CATEGORIES:
            stats = category_stats.get(cat)
            scores = [r["score"] for r in rows
                      if r["category"] == cat and r["score"] is not None]
            movid[cat] = {
                "acc": 100.0 * stats["accuracy"] if stats else 0.0,
                "score": sum(scores) / len(scores) if scores else 0.0,
            }
            if stats:
                pooled_n += stats["n"]
                pooled_correct += stats["correct"]
                pooled_scores.extend(scores)
        movid["all"] = {
            "acc": 100.0 * pooled_correct / pooled_n if pooled_n else 0.0,
            "score": sum(pooled_scores) / len(pooled_scores) if pooled_scores else 0.0,
        }

    count_rows = [r for r in rows if r["truth_count"] is not None]
    repcount = None
    if count_rows:
        repcount = repcount_metrics([r["pred_count"] for r in count_rows],
                                    [r["truth_count"] for r in count_rows])

    scores = [r["score"] for r in rows if r["score"] is not None]
    mean_score = sum(scores) / len(scores) if scores else None

    return BenchReport(
        total=len(rows),
        seed=seed,
        config_digest=config_digest,
        rows=tuple(rows),
        category_accuracy=category_stats,
        movid=movid,
        repcount=repcount,
        mean_judge_score=mean_score,
        failures=failures,
        backends=backends,
    )
