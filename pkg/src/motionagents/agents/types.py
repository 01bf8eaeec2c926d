"""Plan, verdict, outcome, and trace types shared across the agent loop."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..backends.base import canonical_json
from ..errors import PlanInvalid
from ..media import MediaRef


@dataclass(frozen=True)
class UserQuery:
    """A user turn: free text plus zero or more media attachments."""

    text: str
    attachments: tuple[MediaRef, ...] = ()

    def __post_init__(self) -> None:
        if not self.text.strip():
            raise ValueError("query text must be non-empty")

    def to_dict(self) -> dict:
        return {
            "text": self.text,
            "attachments": [ref.to_dict() for ref in self.attachments],
        }

    def media_by_id(self, media_id: str) -> MediaRef | None:
        for ref in self.attachments:
            if ref.media_id == media_id:
                return ref
        return None


@dataclass(frozen=True)
class Objective:
    objective_id: str
    description: str
    derived_from: str = ""

    def to_dict(self) -> dict:
        return {
            "id": self.objective_id,
            "description": self.description,
            "derived_from": self.derived_from,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Objective":
        return cls(
            objective_id=data["id"],
            description=data["description"],
            derived_from=data.get("derived_from", ""),
        )


_BINDING_KINDS = ("media", "literal", "task_output")


@dataclass(frozen=True)
class Binding:
    """One task input: attached media, a literal value, or another task's output."""

    kind: str
    media_id: str | None = None
    value: object = None
    task_id: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in _BINDING_KINDS:
            raise ValueError(f"unknown binding kind {self.kind!r}")
        if self.kind == "media" and not self.media_id:
            raise ValueError("media binding needs media_id")
        if self.kind == "task_output" and not self.task_id:
            raise ValueError("task_output binding needs task_id")

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.kind == "media":
            out["media_id"] = self.media_id
        elif self.kind == "literal":
            out["value"] = self.value
        else:
            out["task_id"] = self.task_id
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "Binding":
        return cls(
            kind=data["kind"],
            media_id=data.get("media_id"),
            value=data.get("value"),
            task_id=data.get("task_id"),
        )


@dataclass(frozen=True)
class MetaTask:
    task_id: str
    objective_id: str
    capability: str
    instruction: str = ""
    inputs: tuple[Binding, ...] = ()
    depends_on: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "id": self.task_id,
            "objective_id": self.objective_id,
            "capability": self.capability,
            "instruction": self.instruction,
            "inputs": [b.to_dict() for b in self.inputs],
            "depends_on": list(self.depends_on),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MetaTask":
        return cls(
            task_id=data["id"],
            objective_id=data["objective_id"],
            capability=data["capability"],
            instruction=data.get("instruction", ""),
            inputs=tuple(Binding.from_dict(b) for b in data.get("inputs", [])),
            depends_on=tuple(data.get("depends_on", [])),
        )


@dataclass(frozen=True)
class MetaTaskPlan:
    """A versioned decomposition of the query into objectives and tasks."""

    version: int
    objectives: tuple[Objective, ...]
    tasks: tuple[MetaTask, ...]

    def task_ids(self) -> list[str]:
        return [t.task_id for t in self.tasks]

    def get_task(self, task_id: str) -> MetaTask:
        for task in self.tasks:
            if task.task_id == task_id:
                return task
        raise KeyError(task_id)

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "objectives": [o.to_dict() for o in self.objectives],
            "tasks": [t.to_dict() for t in self.tasks],
        }

    @classmethod
    def from_payload(cls, payload: dict, version: int) -> "MetaTaskPlan":
        objectives = tuple(Objective.from_dict(o) for o in payload["objectives"])
        tasks = tuple(MetaTask.from_dict(t) for t in payload["tasks"])
        return cls(version=version, objectives=objectives, tasks=tasks)

    def structural_violations(self, capabilities: set[str],
                              media_ids: set[str] | None = None) -> list[str]:
        """All structural defects of the plan; empty list means well-formed."""
        violations: list[str] = []
        if not self.objectives:
            violations.append("plan has no objectives")
        if not self.tasks:
            violations.append("plan has no tasks")

        seen_obj: set[str] = set()
        for objective in self.objectives:
            if objective.objective_id in seen_obj:
                violations.append(f"duplicate objective id {objective.objective_id!r}")
            seen_obj.add(objective.objective_id)

        known = set()
        for task in self.tasks:
            if task.task_id in known:
                violations.append(f"duplicate task id {task.task_id!r}")
            known.add(task.task_id)

        for task in self.tasks:
            if task.objective_id not in seen_obj:
                violations.append(
                    f"task {task.task_id!r} references unknown objective "
                    f"{task.objective_id!r}"
                )
            if task.capability not in capabilities:
                violations.append(
                    f"task {task.task_id!r} needs capability {task.capability!r} "
                    "not present in the catalog"
                )
            for dep in task.depends_on:
                if dep == task.task_id:
                    violations.append(f"task {task.task_id!r} depends on itself")
                elif dep not in known:
                    violations.append(
                        f"task {task.task_id!r} depends on unknown task {dep!r}"
                    )
            for binding in task.inputs:
                if binding.kind == "task_output" and binding.task_id not in known:
                    violations.append(
                        f"task {task.task_id!r} consumes output of unknown task "
                        f"{binding.task_id!r}"
                    )
                if (binding.kind == "media" and media_ids is not None
                        and binding.media_id not in media_ids):
                    violations.append(
                        f"task {task.task_id!r} references unknown media "
                        f"{binding.media_id!r}"
                    )

        covered = {t.objective_id for t in self.tasks}
        for objective in self.objectives:
            if objective.objective_id not in covered:
                violations.append(
                    f"objective {objective.objective_id!r} has no supporting task"
                )

        if not self._has_cycle_free_order():
            violations.append("task dependencies form a cycle")
        return violations

    def _has_cycle_free_order(self) -> bool:
        try:
            self.topological_order()
        except PlanInvalid:
            return False
        return True

    def topological_order(self) -> list[str]:
        """Kahn ordering over declared dependencies, stable by plan position."""
        position = {t.task_id: i for i, t in enumerate(self.tasks)}
        indegree = {t.task_id: 0 for t in self.tasks}
        dependents: dict[str, list[str]] = {t.task_id: [] for t in self.tasks}
        for task in self.tasks:
            for dep in task.depends_on:
                if dep not in indegree or dep == task.task_id:
                    raise PlanInvalid([f"bad dependency {dep!r} of {task.task_id!r}"])
                indegree[task.task_id] += 1
                dependents[dep].append(task.task_id)
        ready = sorted((tid for tid, d in indegree.items() if d == 0),
                       key=position.__getitem__)
        order: list[str] = []
        while ready:
            current = ready.pop(0)
            order.append(current)
            changed = False
            for follower in dependents[current]:
                indegree[follower] -= 1
                if indegree[follower] == 0:
                    ready.append(follower)
                    changed = True
            if changed:
                ready.sort(key=position.__getitem__)
        if len(order) != len(self.tasks):
            raise PlanInvalid(["task dependencies form a cycle"])
        return order


@dataclass(frozen=True)
class ToolSelection:
    task_id: str
    tool_id: str
    reason: str = ""

    def to_dict(self) -> dict:
        return {"task_id": self.task_id, "tool_id": self.tool_id, "reason": self.reason}


APPROVE = "approve"
REJECT = "reject"


@dataclass(frozen=True)
class Verdict:
    """A verifier decision with its reasons and concrete revision hints."""

    decision: str
    reasons: tuple[str, ...] = ()
    revision_hints: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.decision not in (APPROVE, REJECT):
            raise ValueError(f"unknown decision {self.decision!r}")

    @property
    def approved(self) -> bool:
        return self.decision == APPROVE

    def to_dict(self) -> dict:
        return {
            "decision": self.decision,
            "reasons": list(self.reasons),
            "revision_hints": list(self.revision_hints),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Verdict":
        return cls(
            decision=data["decision"],
            reasons=tuple(str(r) for r in data.get("reasons", [])),
            revision_hints=tuple(str(h) for h in data.get("revision_hints", [])),
        )


TASK_OK = "ok"
TASK_ERROR = "error"
TASK_SKIPPED = "skipped"


@dataclass(frozen=True)
class TaskOutcome:
    task_id: str
    tool_id: str
    status: str
    payload: dict | None = None
    error: str | None = None

    def __post_init__(self) -> None:
        if self.status not in (TASK_OK, TASK_ERROR, TASK_SKIPPED):
            raise ValueError(f"unknown task status {self.status!r}")
        if self.status == TASK_OK and self.payload is None:
            raise ValueError("ok outcome needs a payload")
        if self.status == TASK_ERROR and not self.error:
            raise ValueError("error outcome needs an error message")

    def to_dict(self) -> dict:
        return {
            "task_id": self.task_id,
            "tool_id": self.tool_id,
            "status": self.status,
            "payload": self.payload,
            "error": self.error,
        }


@dataclass(frozen=True)
class RoundRecord:
    """One pass of the loop: plan snapshot, verdicts, selections, outcomes."""

    round_index: int
    plan: MetaTaskPlan
    plan_verdict: Verdict
    selections: tuple[ToolSelection, ...] = ()
    outcomes: tuple[TaskOutcome, ...] = ()
    results_verdict: Verdict | None = None

    def to_dict(self) -> dict:
        return {
            "round_index": self.round_index,
            "plan": self.plan.to_dict(),
            "plan_verdict": self.plan_verdict.to_dict(),
            "selections": [s.to_dict() for s in self.selections],
            "outcomes": [o.to_dict() for o in self.outcomes],
            "results_verdict": (
                self.results_verdict.to_dict() if self.results_verdict else None
            ),
        }


FINAL_OK = "ok"
FINAL_FAILED = "failed"


@dataclass(frozen=True)
class ExecutionTrace:
    """The full record of one turn, serializable byte-for-byte."""

    turn_id: str
    query: UserQuery
    rounds: tuple[RoundRecord, ...]
    final_status: str
    answer: str | None = None
    failure: dict | None = field(default=None)

    def __post_init__(self) -> None:
        if self.final_status not in (FINAL_OK, FINAL_FAILED):
            raise ValueError(f"unknown final status {self.final_status!r}")
        if self.final_status == FINAL_OK and self.answer is None:
            raise ValueError("successful trace needs an answer")

    def to_dict(self) -> dict:
        return {
            "turn_id": self.turn_id,
            "query": self.query.to_dict(),
            "rounds": [r.to_dict() for r in self.rounds],
            "final_status": self.final_status,
            "answer": self.answer,
            "failure": self.failure,
        }

    def to_json(self) -> str:
        return canonical_json(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> dict:
        """Traces round-trip as plain dicts; parsing back to objects is not needed."""
        return json.loads(text)
