"""Context assembly and answer generation."""

from __future__ import annotations

import pytest

from motionagents.agents.types import UserQuery
from motionagents.backends.base import BackendKind
from motionagents.backends.mock import MockBackend, MockScript, ScriptEntry
from motionagents.errors import EmptyContext, ReasonerFailure
from motionagents.motioncore.generate import (
    AnswerPayload,
    ContextEntry,
    GenerationContext,
    generate_answer,
)


def _reasoner(*entries: ScriptEntry) -> MockBackend:
    script = MockScript()
    script.add("generate", *entries)
    return MockBackend("gen", BackendKind.REASONER, script)


CONTEXT = GenerationContext(
    entries=(
        ContextEntry(source="task:t1", payload="the person jumps"),
        ContextEntry(source="task:t2", payload="three repetitions"),
    ),
    query=UserQuery(text="how many jumps?"),
)


def test_generate_answer_returns_text_with_sources():
    model = _reasoner(ScriptEntry(text="three"))
    answer = generate_answer(CONTEXT, model)
    assert answer == AnswerPayload(text="three", sources=("task:t1", "task:t2"))


def test_generate_payload_keeps_entry_order():
    model = _reasoner(ScriptEntry(text="three"))
    generate_answer(CONTEXT, model)
    request = model.calls[0]
    assert request.schema_tag == "generate"
    assert request.payload == {
        "query_text": "how many jumps?",
        "entries": [
            {"source": "task:t1", "summary": "the person jumps"},
            {"source": "task:t2", "summary": "three repetitions"},
        ],
    }


def test_generate_rejects_empty_context():
    model = _reasoner(ScriptEntry(text="three"))
    with pytest.raises(EmptyContext):
        generate_answer(GenerationContext(entries=(), query=UserQuery(text="q")), model)
    assert model.calls == []


def test_generate_wraps_backend_failure():
    model = _reasoner(ScriptEntry(error="transport", error_message="link down"))
    with pytest.raises(ReasonerFailure):
        generate_answer(CONTEXT, model)


def test_generate_rejects_empty_reply():
    model = _reasoner(ScriptEntry(text=""))
    with pytest.raises(ReasonerFailure):
        generate_answer(CONTEXT, model)


def test_answer_payload_round_trip():
    answer = AnswerPayload(text="three", sources=("task:t1",))
    assert AnswerPayload.from_dict(answer.to_dict()) == answer
    assert AnswerPayload.from_dict({"text": "bare"}) == AnswerPayload(text="bare")
