"""Benchmark harness: dataset loading, grading, metrics, and reporting."""

from .datasets import (
    BenchCase,
    MOVID_CATEGORIES,
    TRUTH_CHOICE,
    TRUTH_COUNT,
    TRUTH_TEXT,
    dataset_formats,
    load_dataset,
)
from .judging import (
    JudgeResult,
    RUBRIC_VERSION,
    eval_multiple_choice,
    heuristic_judge,
    judge_answer,
)
from .metrics import repcount_metrics
from .runner import BenchReport, run_benchmark

__all__ = [
    "BenchCase",
    "BenchReport",
    "JudgeResult",
    "MOVID_CATEGORIES",
    "RUBRIC_VERSION",
    "TRUTH_CHOICE",
    "TRUTH_COUNT",
    "TRUTH_TEXT",
    "dataset_formats",
    "eval_multiple_choice",
    "heuristic_judge",
    "judge_answer",
    "load_dataset",
    "repcount_metrics",
    "run_benchmark",
]
