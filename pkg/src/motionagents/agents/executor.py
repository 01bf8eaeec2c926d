"""Tool selection and dependency-ordered plan execution."""

from __future__ import annotations

import json
from typing import Callable

from ..backends.base import Backend, ModelRequest, Schema
from ..errors import NoToolAvailable
from ..motioncore.registry import CatalogSnapshot, ToolCall, UpstreamEntry
from .types import (
    Binding,
    MetaTask,
    MetaTaskPlan,
    TaskOutcome,
    ToolSelection,
    UserQuery,
    TASK_ERROR,
    TASK_OK,
    TASK_SKIPPED,
)


def select_tool(task: MetaTask, catalog: CatalogSnapshot,
                reasoner: Backend | None = None,
                role_prompt: str = "") -> ToolSelection:
    """Pick one tool for the task's capability.

    With several candidates a reasoner may choose; an absent, unparseable, or
    out-of-candidate answer falls back to the earliest registered tool.
    """
    candidates = catalog.find_capability(task.capability)
    if not candidates:
        raise NoToolAvailable(task.capability)
    if len(candidates) == 1:
        return ToolSelection(task_id=task.task_id, tool_id=candidates[0].tool_id,
                             reason="only candidate")
    if reasoner is not None:
        payload = {
            "task": task.to_dict(),
            "candidates": [d.to_dict() for d in candidates],
        }
        try:
            response = reasoner.invoke(ModelRequest(
                schema_tag=Schema.SELECT_TOOL, payload=payload,
                role_prompt=role_prompt))
            data = response.structured if response.structured else json.loads(response.text)
            chosen = data["tool_id"]
        except Exception:
            chosen = None
        if chosen in {d.tool_id for d in candidates}:
            return ToolSelection(task_id=task.task_id, tool_id=chosen,
                                 reason="selected by reasoner")
    return ToolSelection(task_id=task.task_id, tool_id=candidates[0].tool_id,
                         reason="first registered candidate")


def _resolve_inputs(task: MetaTask, query: UserQuery) -> list[dict]:
    resolved: list[dict] = []
    for binding in task.inputs:
        entry = binding.to_dict()
        if binding.kind == "media":
            ref = query.media_by_id(binding.media_id)
            if ref is None:
                raise ValueError(f"media {binding.media_id!r} not attached to query")
            entry["resolved"] = ref
        resolved.append(entry)
    return resolved


def execute_plan(plan: MetaTaskPlan, selections: tuple[ToolSelection, ...],
                 query: UserQuery,
                 handler_for: Callable[[str], Callable[[ToolCall], dict]],
                 on_task_started: Callable[[str, str], None] | None = None,
                 on_task_finished: Callable[[TaskOutcome], None] | None = None,
                 ) -> tuple[TaskOutcome, ...]:
    """Run every task in dependency order, skipping dependents of failures."""
    tool_by_task = {s.task_id: s.tool_id for s in selections}
    outcomes: dict[str, TaskOutcome] = {}
    ordered: list[TaskOutcome] = []

    for task_id in plan.topological_order():
        task = plan.get_task(task_id)
        tool_id = tool_by_task.get(task_id, "")
        blocking = _blocking_dependency(task, outcomes)
        if blocking is not None:
            outcome = TaskOutcome(task_id=task_id, tool_id=tool_id,
                                  status=TASK_SKIPPED,
                                  error=f"dependency {blocking} did not finish")
        elif not tool_id:
            outcome = TaskOutcome(
                task_id=task_id, tool_id="", status=TASK_ERROR,
                error=f"capability '{task.capability}' unavailable for task {task_id}")
        else:
            if on_task_started is not None:
                on_task_started(task_id, tool_id)
            outcome = _run_task(task, tool_id, query, outcomes, handler_for)
        outcomes[task_id] = outcome
        ordered.append(outcome)
        if on_task_finished is not None and outcome.status != TASK_SKIPPED:
            on_task_finished(outcome)
    return tuple(ordered)


def _blocking_dependency(task: MetaTask, outcomes: dict[str, TaskOutcome]) -> str | None:
    needed = set(task.depends_on)
    needed.update(b.task_id for b in task.inputs if b.kind == "task_output")
    for dep in sorted(needed):
        prior = outcomes.get(dep)
        if prior is None or prior.status != TASK_OK:
            return dep
    return None


def _run_task(task: MetaTask, tool_id: str, query: UserQuery,
              outcomes: dict[str, TaskOutcome],
              handler_for: Callable[[str], Callable[[ToolCall], dict]]) -> TaskOutcome:
    upstream: list[UpstreamEntry] = []
    seen: set[str] = set()
    dep_ids = list(task.depends_on) + [
        b.task_id for b in task.inputs if b.kind == "task_output"
    ]
    for dep in dep_ids:
        if dep in seen:
            continue
        seen.add(dep)
        prior = outcomes[dep]
        upstream.append(UpstreamEntry(task_id=dep, tool_id=prior.tool_id,
                                      payload=prior.payload))
    try:
        handler = handler_for(tool_id)
        call = ToolCall(task_id=task.task_id, capability=task.capability,
                        query=query, inputs=_resolve_inputs(task, query),
                        upstream=tuple(upstream))
        payload = handler(call)
    except Exception as exc:
        return TaskOutcome(task_id=task.task_id, tool_id=tool_id,
                           status=TASK_ERROR, error=str(exc) or exc.__class__.__name__)
    if not isinstance(payload, dict):
        return TaskOutcome(task_id=task.task_id, tool_id=tool_id, status=TASK_ERROR,
                           error="tool returned a non-dict payload")
    return TaskOutcome(task_id=task.task_id, tool_id=tool_id,
                       status=TASK_OK, payload=payload)


def selection_bindings(plan: MetaTaskPlan) -> dict[str, list[Binding]]:
    """Task id to declared inputs, handy for callers inspecting data flow."""
    return {task.task_id: list(task.inputs) for task in plan.tasks}
