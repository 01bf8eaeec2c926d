"""Rule-based deterministic backend.

Serves every schema tag the engine uses with fixed capability-tag templates,
so the whole orchestration loop can run (and be asserted on) without any
model behind it. It is registered like any other backend; engines that want
model-backed planning swap in a remote transport with the same surface.
"""

from __future__ import annotations

import hashlib
import json
import re

from ..text import normalize, token_list, tokens
from .base import Backend, BackendKind, ModelRequest, ModelResponse, Schema

_COUNT_PATTERN = re.compile(r"\bhow many\b|\bcount\b", re.IGNORECASE)
_RETRIEVE_PATTERN = re.compile(r"\bsimilar\b|\bretriev\w*\b|\blook up a motion\b", re.IGNORECASE)
_KNOWLEDGE_PATTERN = re.compile(
    r"\badvice\b|\bguidelines?\b|\btips?\b|\bknowledge base\b|\bprofessional analysis\b",
    re.IGNORECASE,
)
# Capabilities named in revision hints as unavailable or failing.
_EXCLUDE_PATTERN = re.compile(r"([a-z][a-z0-9_]*)['\"]? (?:is )?(?:unavailable|failed)", re.IGNORECASE)


def _catalog_capabilities(payload: dict) -> set[str]:
    caps: set[str] = set()
    for tool in payload.get("catalog", []):
        caps.update(tool.get("capabilities", []))
    return caps


def _chain_for(query_text: str, available: set[str], excluded: set[str],
               has_media: bool) -> list[str]:
    """Pick an ordered capability chain for the query.

    Counting queries prefer the dedicated counter; retrieval and knowledge
    cues route to the auxiliary tools; media-free queries go straight to
    generation. Steps missing from the catalog are substituted or dropped,
    except the primary analysis step, which is kept so that validation can
    reject the plan explicitly when nothing can serve it.
    """
    usable = available - excluded

    def pick(*candidates: str) -> str:
        for cap in candidates:
            if cap in usable:
                return cap
        return candidates[0]

    if _RETRIEVE_PATTERN.search(query_text) and "retrieve_motion" in usable:
        chain = ["retrieve_motion"]
    elif _KNOWLEDGE_PATTERN.search(query_text) and "lookup_knowledge" in usable:
        chain = ["lookup_knowledge"]
    elif not has_media:
        chain = []
    elif _COUNT_PATTERN.search(query_text):
        chain = [pick("count_repetitions", "analyze_motion"), "aggregate"]
    else:
        chain = [pick("analyze_motion", "count_repetitions"), "aggregate"]
    if "aggregate" in chain and "aggregate" not in usable:
        chain.remove("aggregate")
    if "generate_answer" in usable or not chain:
        chain.append("generate_answer")
    return chain


def build_template_plan(payload: dict, excluded: set[str] | None = None) -> dict:
    """Build the template plan JSON for a plan/replan payload."""
    query_text = payload.get("query_text", "")
    attachments = payload.get("media", [])
    available = _catalog_capabilities(payload)
    chain = _chain_for(query_text, available, excluded or set(), bool(attachments))

    tasks = []
    for index, capability in enumerate(chain):
        task_id = f"t{index + 1}"
        if index == 0:
            inputs = [{"kind": "media", "media_id": a["media_id"]} for a in attachments]
            inputs.append({"kind": "literal", "value": query_text})
        else:
            inputs = [{"kind": "task_output", "task_id": f"t{index}"}]
        tasks.append(
            {
                "id": task_id,
                "objective_id": "o1",
                "capability": capability,
                "inputs": inputs,
                "depends_on": [] if index == 0 else [f"t{index}"],
            }
        )
    return {
        "objectives": [
            {"id": "o1", "description": query_text, "derived_from": "whole-query"}
        ],
        "tasks": tasks,
    }


def _excluded_from_hints(payload: dict) -> set[str]:
    text = " ".join(payload.get("reasons", []) + payload.get("revision_hints", []))
    return {m.group(1).lower() for m in _EXCLUDE_PATTERN.finditer(text)}


def _hash_embed(text: str, dim: int, seed: int) -> list[float]:
    """Seeded feature-hashing projection; deterministic across platforms."""
    vec = [0.0] * dim
    for token in token_list(text):
        digest = hashlib.sha256(f"{seed}|{token}".encode("utf-8")).digest()
        index = int.from_bytes(digest[:4], "big") % dim
        sign = 1.0 if digest[4] % 2 == 0 else -1.0
        vec[index] += sign
    norm = sum(v * v for v in vec) ** 0.5
    if norm == 0.0:
        vec[0] = 1.0
        norm = 1.0
    return [v / norm for v in vec]


class TemplateBackend(Backend):
    """Deterministic fallback for every agent role."""

    transport = "template"

    def __init__(self, model_id: str, kind: BackendKind = BackendKind.REASONER,
                 embed_dim: int = 64, seed: int = 0):
        super().__init__(model_id, kind)
        self.embed_dim = embed_dim
        self.seed = seed
        self.calls: list[ModelRequest] = []

    def invoke(self, request: ModelRequest) -> ModelResponse:
        self.calls.append(request)
        handler = getattr(self, f"_handle_{request.schema_tag}", None)
        if handler is None:
            raise ValueError(f"template backend has no rule for schema {request.schema_tag!r}")
        return handler(request.payload)

    # --- planning ---------------------------------------------------------

    def _handle_plan(self, payload: dict) -> ModelResponse:
        plan = build_template_plan(payload)
        return ModelResponse(text=json.dumps(plan), structured=plan)

    def _handle_replan(self, payload: dict) -> ModelResponse:
        plan = build_template_plan(payload, excluded=_excluded_from_hints(payload))
        return ModelResponse(text=json.dumps(plan), structured=plan)

    def _handle_verify_plan(self, payload: dict) -> ModelResponse:
        verdict = {"decision": "approve", "reasons": [], "revision_hints": []}
        return ModelResponse(text="approve", structured=verdict)

    def _handle_verify_results(self, payload: dict) -> ModelResponse:
        verdict = {"decision": "approve", "reasons": [], "revision_hints": []}
        return ModelResponse(text="approve", structured=verdict)

    def _handle_select_tool(self, payload: dict) -> ModelResponse:
        candidates = payload.get("candidates", [])
        choice = candidates[0] if candidates else ""
        return ModelResponse(text=choice, structured={"tool_id": choice})

    # --- motioncore roles -------------------------------------------------

    def _handle_analysis(self, payload: dict) -> ModelResponse:
        media = payload.get("media", {})
        question = payload.get("question", "")
        text = f"analysis of {media.get('media_id', 'input')}: no model attached ({question})"
        return ModelResponse(text=text)

    def _handle_aggregate(self, payload: dict) -> ModelResponse:
        # The deterministic anchor computed by the caller is the answer.
        return ModelResponse(text=payload.get("anchor", ""))

    def _handle_preliminary(self, payload: dict) -> ModelResponse:
        candidates = payload.get("candidates", [])
        if not candidates:
            return ModelResponse(text="")
        best = max(candidates, key=lambda c: (c.get("confidence", 0.0), normalize(c.get("text", ""))))
        return ModelResponse(text=best.get("text", ""))

    def _handle_refine(self, payload: dict) -> ModelResponse:
        return ModelResponse(text=payload.get("preliminary", ""))

    def _handle_generate(self, payload: dict) -> ModelResponse:
        parts = []
        for entry in payload.get("entries", []):
            parts.append(str(entry.get("summary", "")))
        answer = "; ".join(p for p in parts if p) or "no context available"
        return ModelResponse(text=answer)

    def _handle_judge(self, payload: dict) -> ModelResponse:
        prediction = tokens(payload.get("predicted", ""))
        truth = tokens(payload.get("reference", ""))
        overlap = len(prediction & truth) / max(1, len(truth))
        correct = truth.issubset(prediction) and bool(truth)
        score = max(1, min(5, 1 + round(4 * overlap)))
        structured = {"correct": correct, "score": score}
        return ModelResponse(text=json.dumps(structured), structured=structured)

    def _handle_embed(self, payload: dict) -> ModelResponse:
        dim = int(payload.get("dim", self.embed_dim))
        vectors = [_hash_embed(t, dim, self.seed) for t in payload.get("texts", [])]
        return ModelResponse(text="", structured={"vectors": vectors})
