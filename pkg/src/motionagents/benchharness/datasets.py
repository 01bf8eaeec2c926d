"""Benchmark case loading for the supported dataset layouts."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import UnknownFormat, ValidationError
from ..media import MediaRef

TRUTH_TEXT = "text"
TRUTH_CHOICE = "choice"
TRUTH_COUNT = "count"

MOVID_CATEGORIES = ("body", "seq", "dir", "rea", "hall")


@dataclass(frozen=True)
class BenchCase:
    """One evaluation item: a query, optional media, and its ground truth."""

    case_id: str
    query_text: str
    category: str
    truth: dict
    media: MediaRef | None = None
    options: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        kind = self.truth.get("kind")
        if kind not in (TRUTH_TEXT, TRUTH_CHOICE, TRUTH_COUNT):
            raise ValueError(f"unknown truth kind {kind!r}")
        if kind == TRUTH_CHOICE and not self.options:
            raise ValueError("choice truth needs options")

    def to_dict(self) -> dict:
        return {
            "case_id": self.case_id,
            "query_text": self.query_text,
            "category": self.category,
            "truth": dict(self.truth),
            "media": self.media.to_dict() if self.media else None,
            "options": list(self.options),
        }


def _require(record: dict, key: str, line: int):
    if key not in record:
        raise ValidationError(line, f"missing required field {key!r}")
    return record[key]


def _media_from(record: dict, line: int, default_id: str) -> MediaRef | None:
    if "media" in record and record["media"] is not None:
        media = record["media"]
        if not isinstance(media, dict) or not media.get("media_id"):
            raise ValidationError(line, "media must be an object with media_id")
        return MediaRef(media_id=media["media_id"],
                        motion_path=media.get("motion_path"),
                        video_path=media.get("video_path"))
    if record.get("motion_id"):
        mid = str(record["motion_id"])
        return MediaRef(media_id=mid, motion_path=f"{mid}.npy")
    if record.get("video"):
        vid = str(record["video"])
        return MediaRef(media_id=vid, video_path=vid)
    return None


def _parse_cases(record: dict, line: int) -> BenchCase:
    truth = _require(record, "truth", line)
    if not isinstance(truth, dict):
        raise ValidationError(line, "truth must be an object")
    case_id = str(_require(record, "id", line))
    options = tuple(record.get("options", []))
    try:
        return BenchCase(
            case_id=case_id,
            query_text=_require(record, "query", line),
            category=str(record.get("category", "general")),
            truth=truth,
            media=_media_from(record, line, case_id),
            options=options,
        )
    except ValueError as exc:
        raise ValidationError(line, str(exc))


def _parse_movid(record: dict, line: int) -> BenchCase:
    category = str(_require(record, "type", line)).strip().lower()
    if category not in MOVID_CATEGORIES:
        raise ValidationError(
            line, f"type must be one of {', '.join(MOVID_CATEGORIES)}")
    case_id = str(record.get("id", f"movid-{line}"))
    return BenchCase(
        case_id=case_id,
        query_text=_require(record, "question", line),
        category=category,
        truth={"kind": TRUTH_TEXT, "answer": _require(record, "answer", line)},
        media=_media_from(record, line, case_id),
    )


def _parse_babelqa(record: dict, line: int) -> BenchCase:
    case_id = str(record.get("id", f"babelqa-{line}"))
    return BenchCase(
        case_id=case_id,
        query_text=_require(record, "question", line),
        category="qa",
        truth={"kind": TRUTH_TEXT, "answer": _require(record, "answer", line)},
        media=_media_from(record, line, case_id),
    )


def _parse_mvbench(record: dict, line: int) -> BenchCase:
    candidates = _require(record, "candidates", line)
    answer = _require(record, "answer", line)
    if not isinstance(candidates, list) or not candidates:
        raise ValidationError(line, "candidates must be a non-empty list")
    if answer not in candidates:
        raise ValidationError(line, "answer must be one of the candidates")
    case_id = str(record.get("id", f"mvbench-{line}"))
    return BenchCase(
        case_id=case_id,
        query_text=_require(record, "question", line),
        category="mc",
        truth={"kind": TRUTH_CHOICE, "answer_index": candidates.index(answer)},
        media=_media_from(record, line, case_id),
        options=tuple(candidates),
    )


def _parse_morepcount(record: dict, line: int) -> BenchCase:
    count = _require(record, "count", line)
    if not isinstance(count, int) or count < 0:
        raise ValidationError(line, "count must be a non-negative integer")
    case_id = str(record.get("id", f"morepcount-{line}"))
    question = record.get("question", "How many times is the movement repeated?")
    return BenchCase(
        case_id=case_id,
        query_text=question,
        category="repcount",
        truth={"kind": TRUTH_COUNT, "count": count},
        media=_media_from(record, line, case_id),
    )


_PARSERS = {
    "cases": _parse_cases,
    "movid": _parse_movid,
    "babelqa": _parse_babelqa,
    "mvbench": _parse_mvbench,
    "morepcount": _parse_morepcount,
}


def dataset_formats() -> list[str]:
    return sorted(_PARSERS)


def load_dataset(path: str | Path, fmt: str = "cases") -> list[BenchCase]:
    """Parse a JSONL dataset.  Errors report 1-based line numbers."""
    if fmt not in _PARSERS:
        raise UnknownFormat(
            f"unknown dataset format {fmt!r}; expected one of {', '.join(dataset_formats())}")
    parser = _PARSERS[fmt]
    cases: list[BenchCase] = []
    seen_ids: set[str] = set()
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            if not raw.strip():
                continue
            try:
                record = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise ValidationError(line_no, f"invalid JSON: {exc.msg}")
            if not isinstance(record, dict):
                raise ValidationError(line_no, "each line must be a JSON object")
            case = parser(record, line_no)
            if case.case_id in seen_ids:
                raise ValidationError(line_no, f"duplicate case id {case.case_id!r}")
            seen_ids.add(case.case_id)
            cases.append(case)
    return cases
