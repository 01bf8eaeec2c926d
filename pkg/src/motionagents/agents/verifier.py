"""Plan and result verification: structural checks first, then a reasoner pass."""

from __future__ import annotations

import json

from ..backends.base import Backend, ModelRequest, ModelResponse, Schema
from ..motioncore.registry import CatalogSnapshot
from .types import (
    APPROVE,
    REJECT,
    MetaTaskPlan,
    TaskOutcome,
    UserQuery,
    Verdict,
    TASK_OK,
    TASK_SKIPPED,
)


def _parse_verdict(response: ModelResponse) -> Verdict:
    data = response.structured if response.structured else json.loads(response.text)
    return Verdict.from_dict(data)


def verify_plan(plan: MetaTaskPlan, query: UserQuery, catalog: CatalogSnapshot,
                reasoner: Backend, role_prompt: str = "") -> Verdict:
    """Reject on any structural defect; otherwise ask the reasoner to review.

    A semantic response that cannot be parsed counts as approval: the plan
    already passed every mechanical check, and treating noise as rejection
    would burn rounds without a usable revision hint.
    """
    media_ids = {ref.media_id for ref in query.attachments}
    violations = plan.structural_violations(set(catalog.capabilities()), media_ids)
    if violations:
        return Verdict(decision=REJECT, reasons=tuple(violations),
                       revision_hints=tuple(violations))
    payload = {
        "query_text": query.text,
        "plan": plan.to_dict(),
        "catalog": catalog.to_payload(),
    }
    response = reasoner.invoke(ModelRequest(
        schema_tag=Schema.VERIFY_PLAN, payload=payload, role_prompt=role_prompt))
    try:
        return _parse_verdict(response)
    except (KeyError, ValueError, TypeError, json.JSONDecodeError):
        return Verdict(decision=APPROVE,
                       reasons=("semantic verdict unparseable; structural checks passed",))


def _outcome_summary(outcome: TaskOutcome) -> dict:
    summary: dict = {
        "task_id": outcome.task_id,
        "tool_id": outcome.tool_id,
        "status": outcome.status,
    }
    if outcome.payload is not None:
        summary["payload_kind"] = outcome.payload.get("kind")
    if outcome.error:
        summary["error"] = outcome.error
    return summary


def verify_results(query: UserQuery, plan: MetaTaskPlan,
                   outcomes: tuple[TaskOutcome, ...], reasoner: Backend,
                   role_prompt: str = "") -> Verdict:
    """Reject mechanically when any task did not finish; else reasoner review."""
    problems: list[str] = []
    for outcome in outcomes:
        if outcome.status == TASK_OK:
            continue
        if outcome.status == TASK_SKIPPED:
            reason = outcome.error or "unmet dependency"
            problems.append(f"task {outcome.task_id} was skipped: {reason}")
        elif outcome.error and "unavailable" in outcome.error:
            # Capability-gap messages pass through verbatim so the replanner
            # can route around the capability instead of retrying the tool.
            problems.append(outcome.error)
        else:
            problems.append(
                f"task {outcome.task_id} execution error "
                f"(tool {outcome.tool_id}): {outcome.error}"
            )
    if problems:
        return Verdict(decision=REJECT, reasons=tuple(problems),
                       revision_hints=tuple(problems))
    payload = {
        "query_text": query.text,
        "plan_version": plan.version,
        "outcomes": [_outcome_summary(o) for o in outcomes],
    }
    response = reasoner.invoke(ModelRequest(
        schema_tag=Schema.VERIFY_RESULTS, payload=payload, role_prompt=role_prompt))
    try:
        return _parse_verdict(response)
    except (KeyError, ValueError, TypeError, json.JSONDecodeError):
        return Verdict(decision=APPROVE,
                       reasons=("semantic verdict unparseable; all tasks finished",))
