"""Query decomposition into meta-task plans via a reasoner backend."""

from __future__ import annotations

import json

from ..backends.base import Backend, ModelRequest, ModelResponse, Schema
from ..errors import EmptyCatalog, UndecomposableQuery
from ..motioncore.registry import CatalogSnapshot
from .types import MetaTaskPlan, UserQuery


def _structured_payload(response: ModelResponse) -> dict:
    if response.structured:
        return response.structured
    return json.loads(response.text)


def _base_payload(query: UserQuery, catalog: CatalogSnapshot) -> dict:
    return {
        "query_text": query.text,
        "media": [ref.to_dict() for ref in query.attachments],
        "catalog": catalog.to_payload(),
    }


def plan_query(query: UserQuery, catalog: CatalogSnapshot, reasoner: Backend,
               role_prompt: str = "", max_attempts: int = 2) -> MetaTaskPlan:
    """First plan for a query.  Malformed responses get one repair retry."""
    if len(catalog) == 0:
        raise EmptyCatalog("tool catalog is empty; nothing can be planned")
    payload = _base_payload(query, catalog)
    return _plan_with_repair(payload, Schema.PLAN, reasoner, role_prompt,
                             max_attempts, version=1)


def replan(query: UserQuery, catalog: CatalogSnapshot, reasoner: Backend,
           previous: MetaTaskPlan, revision_hints: tuple[str, ...],
           role_prompt: str = "", max_attempts: int = 2) -> MetaTaskPlan:
    """Revised plan addressing the verifier's hints.  Version increments."""
    if len(catalog) == 0:
        raise EmptyCatalog("tool catalog is empty; nothing can be planned")
    payload = _base_payload(query, catalog)
    payload["previous_plan"] = previous.to_dict()
    payload["revision_hints"] = list(revision_hints)
    return _plan_with_repair(payload, Schema.REPLAN, reasoner, role_prompt,
                             max_attempts, version=previous.version + 1)


def _plan_with_repair(payload: dict, schema_tag: str, reasoner: Backend,
                      role_prompt: str, max_attempts: int, version: int) -> MetaTaskPlan:
    last_error = "no attempt made"
    attempt_payload = dict(payload)
    for _ in range(max_attempts):
        response = reasoner.invoke(ModelRequest(
            schema_tag=schema_tag, payload=attempt_payload, role_prompt=role_prompt))
        try:
            return MetaTaskPlan.from_payload(_structured_payload(response), version)
        except (KeyError, ValueError, TypeError, json.JSONDecodeError) as exc:
            last_error = f"{exc.__class__.__name__}: {exc}"
            attempt_payload = dict(payload)
            attempt_payload["repair"] = (
                f"previous response was not a valid plan ({last_error}); "
                "respond with JSON containing 'objectives' and 'tasks'"
            )
    raise UndecomposableQuery(
        f"planner produced no valid plan after {max_attempts} attempts: {last_error}"
    )
