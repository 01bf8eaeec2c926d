"""The orchestration loop: plan, verify, execute, verify, replan on rejection."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from ..backends.base import Backend
from ..errors import MotionAgentsError, RoundBudgetExhausted
from ..motioncore.registry import ToolRegistry
from ..motioncore.tools import ToolServices, payload_summary
from ..prompts import DEFAULT_PROMPTS
from .executor import execute_plan, select_tool
from .planner import plan_query, replan
from .types import (
    ExecutionTrace,
    FINAL_FAILED,
    FINAL_OK,
    MetaTaskPlan,
    RoundRecord,
    TaskOutcome,
    ToolSelection,
    UserQuery,
    TASK_OK,
)
from .verifier import verify_plan, verify_results

EventCallback = Callable[[str, dict], None]

EVENT_PLAN_READY = "plan_ready"
EVENT_TASK_STARTED = "task_started"
EVENT_TASK_FINISHED = "task_finished"
EVENT_VERDICT = "verdict"
EVENT_ANSWER = "answer"
EVENT_FAILURE = "failure"


@dataclass(frozen=True)
class ExecutionBudget:
    """Caps on the feedback loop; the round budget bounds total model spend."""

    max_rounds: int = 3
    planner_attempts: int = 2

    def __post_init__(self) -> None:
        if self.max_rounds < 1:
            raise ValueError("max_rounds must be at least 1")
        if self.planner_attempts < 1:
            raise ValueError("planner_attempts must be at least 1")


class Engine:
    """Runs user turns against a tool registry with a bounded feedback loop."""

    def __init__(self, reasoner: Backend, registry: ToolRegistry,
                 services: ToolServices | None = None,
                 budget: ExecutionBudget | None = None,
                 prompts: dict[str, str] | None = None,
                 select_with_reasoner: bool = True):
        self.reasoner = reasoner
        self.registry = registry
        self.services = services
        self.budget = budget or ExecutionBudget()
        self.prompts = dict(DEFAULT_PROMPTS)
        if prompts:
            self.prompts.update(prompts)
        self.select_with_reasoner = select_with_reasoner

    def run_turn(self, query: UserQuery, turn_id: str = "local:0",
                 emit: EventCallback | None = None) -> ExecutionTrace:
        """One full turn.  Always returns a trace; errors become failed traces."""
        send = emit or (lambda name, data: None)
        try:
            return self._run_rounds(query, turn_id, send)
        except MotionAgentsError as exc:
            failure = {"error": exc.__class__.__name__, "message": str(exc)}
            send(EVENT_FAILURE, {"turn_id": turn_id, "failure": failure})
            return ExecutionTrace(turn_id=turn_id, query=query, rounds=(),
                                  final_status=FINAL_FAILED, failure=failure)

    def _run_rounds(self, query: UserQuery, turn_id: str,
                    send: EventCallback) -> ExecutionTrace:
        catalog = self.registry.catalog()
        plan = plan_query(query, catalog, self.reasoner,
                          role_prompt=self.prompts["plan"],
                          max_attempts=self.budget.planner_attempts)
        rounds: list[RoundRecord] = []

        for round_index in range(self.budget.max_rounds):
            catalog = self.registry.catalog()
            plan_verdict = verify_plan(plan, query, catalog, self.reasoner,
                                       role_prompt=self.prompts["verify_plan"])
            if not plan_verdict.approved:
                send(EVENT_VERDICT, {"round": round_index, "stage": "plan",
                                     "verdict": plan_verdict.to_dict()})
                rounds.append(RoundRecord(round_index=round_index, plan=plan,
                                          plan_verdict=plan_verdict))
                if round_index + 1 < self.budget.max_rounds:
                    plan = replan(query, catalog, self.reasoner, plan,
                                  plan_verdict.revision_hints,
                                  role_prompt=self.prompts["replan"],
                                  max_attempts=self.budget.planner_attempts)
                continue

            send(EVENT_PLAN_READY, {"round": round_index, "plan": plan.to_dict()})
            selections = self._select_all(plan, catalog)
            outcomes = execute_plan(
                plan, selections, query, self.registry.handler_for,
                on_task_started=lambda tid, tool: send(
                    EVENT_TASK_STARTED,
                    {"round": round_index, "task_id": tid, "tool_id": tool}),
                on_task_finished=lambda outcome: send(
                    EVENT_TASK_FINISHED,
                    {"round": round_index, "task_id": outcome.task_id,
                     "tool_id": outcome.tool_id, "status": outcome.status}),
            )
            results_verdict = verify_results(query, plan, outcomes, self.reasoner,
                                             role_prompt=self.prompts["verify_results"])
            send(EVENT_VERDICT, {"round": round_index, "stage": "results",
                                 "verdict": results_verdict.to_dict()})
            rounds.append(RoundRecord(round_index=round_index, plan=plan,
                                      plan_verdict=plan_verdict,
                                      selections=selections, outcomes=outcomes,
                                      results_verdict=results_verdict))
            if results_verdict.approved:
                answer = extract_answer(plan, outcomes)
                if answer is not None:
                    send(EVENT_ANSWER, {"turn_id": turn_id, "answer": answer})
                    return ExecutionTrace(turn_id=turn_id, query=query,
                                          rounds=tuple(rounds),
                                          final_status=FINAL_OK, answer=answer)
                hints: tuple[str, ...] = ("no answer could be extracted; "
                                          "add a generate_answer task",)
            else:
                hints = results_verdict.revision_hints
            if round_index + 1 < self.budget.max_rounds:
                plan = replan(query, catalog, self.reasoner, plan, hints,
                              role_prompt=self.prompts["replan"],
                              max_attempts=self.budget.planner_attempts)

        failure = {
            "error": RoundBudgetExhausted.__name__,
            "message": f"no approved result within {self.budget.max_rounds} rounds",
            "rounds_used": len(rounds),
        }
        send(EVENT_FAILURE, {"turn_id": turn_id, "failure": failure})
        return ExecutionTrace(turn_id=turn_id, query=query, rounds=tuple(rounds),
                              final_status=FINAL_FAILED, failure=failure)

    def _select_all(self, plan: MetaTaskPlan,
                    catalog) -> tuple[ToolSelection, ...]:
        reasoner = self.reasoner if self.select_with_reasoner else None
        selections = []
        for task_id in plan.topological_order():
            task = plan.get_task(task_id)
            try:
                selections.append(select_tool(task, catalog, reasoner,
                                              role_prompt=self.prompts["select_tool"]))
            except MotionAgentsError:
                # Executor reports the missing capability as a task error so the
                # verifier can steer the replan instead of aborting the turn.
                continue
        return tuple(selections)


def extract_answer(plan: MetaTaskPlan, outcomes: tuple[TaskOutcome, ...]) -> str | None:
    """The user-facing answer: the generation task's text, else the last result."""
    by_task = {t.task_id: t for t in plan.tasks}
    ok_outcomes = [o for o in outcomes if o.status == TASK_OK and o.payload]
    for outcome in reversed(ok_outcomes):
        task = by_task.get(outcome.task_id)
        if task is not None and task.capability == "generate_answer":
            return outcome.payload.get("text")
    if ok_outcomes:
        return payload_summary(ok_outcomes[-1].payload)
    return None
