"""Final answer synthesis from accumulated tool context."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from ..backends.base import Backend, ModelRequest, Schema
from ..errors import EmptyContext, ReasonerFailure

if TYPE_CHECKING:
    from ..agents.types import UserQuery


@dataclass(frozen=True)
class ContextEntry:
    source: str
    payload: str


@dataclass(frozen=True)
class GenerationContext:
    """Tool outputs in execution-completion order, plus the originating query."""

    entries: tuple[ContextEntry, ...]
    query: "UserQuery"


@dataclass(frozen=True)
class AnswerPayload:
    """The final answer with the context entries it was built from."""

    text: str
    sources: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {"text": self.text, "sources": list(self.sources)}

    @classmethod
    def from_dict(cls, data: dict) -> "AnswerPayload":
        return cls(text=data["text"], sources=tuple(data.get("sources", [])))


def generate_answer(context: GenerationContext, reasoner: Backend,
                    role_prompt: str = "") -> AnswerPayload:
    """Hand the serialized context and query to the reasoner; cite the sources."""
    if not context.entries:
        raise EmptyContext("generation requires at least one context entry")
    request = ModelRequest(
        schema_tag=Schema.GENERATE,
        payload={
            "query_text": context.query.text,
            "entries": [{"source": e.source, "summary": e.payload} for e in context.entries],
        },
        role_prompt=role_prompt,
    )
    try:
        response = reasoner.invoke(request)
    except Exception as exc:
        raise ReasonerFailure(exc, stage="generate") from exc
    if not response.text:
        raise ReasonerFailure(ValueError("empty answer from reasoner"), stage="generate")
    return AnswerPayload(text=response.text, sources=tuple(e.source for e in context.entries))
