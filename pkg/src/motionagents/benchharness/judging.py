"""Answer grading: rubric-based model judging and multiple-choice matching."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Sequence

from ..backends.base import Backend, ModelRequest, Schema
from ..errors import JudgeParseError
from ..prompts import DEFAULT_PROMPTS
from ..text import normalize

RUBRIC_VERSION = "v1"

# Leading option letter only counts when set off by ) . : or end of string,
# so answers that merely start with the article "a" do not match.
_LETTER = re.compile(r"^\(?([a-z])(?:\)|[.:]|$)")


@dataclass(frozen=True)
class JudgeResult:
    correct: bool
    score: int
    raw: dict

    def __post_init__(self) -> None:
        if not 1 <= self.score <= 5:
            raise ValueError("score must be within 1..5")

    def to_dict(self) -> dict:
        return {"correct": self.correct, "score": self.score}


def _clamp_score(value) -> int:
    return max(1, min(5, int(round(float(value)))))


def judge_answer(predicted: str, reference: str, judge: Backend,
                 role_prompt: str | None = None) -> JudgeResult:
    """Grade with a fixed rubric.  One repair retry, then the parse error is fatal."""
    prompt = role_prompt if role_prompt is not None else DEFAULT_PROMPTS["judge"]
    payload = {
        "predicted": predicted,
        "reference": reference,
        "rubric_version": RUBRIC_VERSION,
    }
    last_error = "no attempt made"
    attempt_payload = dict(payload)
    for _ in range(2):
        response = judge.invoke(ModelRequest(
            schema_tag=Schema.JUDGE, payload=attempt_payload, role_prompt=prompt))
        try:
            data = response.structured if response.structured else json.loads(response.text)
            return JudgeResult(correct=bool(data["correct"]),
                              score=_clamp_score(data["score"]), raw=dict(data))
        except (KeyError, ValueError, TypeError, json.JSONDecodeError) as exc:
            last_error = f"{exc.__class__.__name__}: {exc}"
            attempt_payload = dict(payload)
            attempt_payload["repair"] = (
                "previous response was unusable; respond with JSON containing "
                "boolean 'correct' and integer 'score' from 1 to 5"
            )
    raise JudgeParseError(f"judge response unusable after retry: {last_error}")


def heuristic_judge(predicted: str, reference: str) -> JudgeResult:
    """Deterministic fallback grading when no judge backend is configured."""
    pred_tokens = set(normalize(predicted).split())
    ref_tokens = set(normalize(reference).split())
    if not ref_tokens:
        return JudgeResult(correct=False, score=1, raw={})
    overlap = len(pred_tokens & ref_tokens) / len(ref_tokens)
    correct = ref_tokens <= pred_tokens
    return JudgeResult(correct=correct, score=_clamp_score(1 + 4 * overlap), raw={})


def eval_multiple_choice(predicted: str, options: Sequence[str]) -> int | None:
    """Match a free-text answer to one option index, or None when ambiguous.

    Rules apply in order and the first one that pins down exactly one option
    wins: a leading option letter, exact normalized text, then containment of
    exactly one option's text.
    """
    pred = normalize(predicted)
    if not pred or not options:
        return None
    match = _LETTER.match(pred)
    if match:
        index = ord(match.group(1)) - ord("a")
        if 0 <= index < len(options):
            return index
    normalized = [normalize(option) for option in options]
    exact = [i for i, option in enumerate(normalized) if option == pred]
    if len(exact) == 1:
        return exact[0]
    contained = [i for i, option in enumerate(normalized) if option and option in pred]
    if len(contained) == 1:
        return contained[0]
    return None
