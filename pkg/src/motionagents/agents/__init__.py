"""Agent loop: planning, verification, execution, and the turn engine."""

from .engine import (
    Engine,
    EVENT_ANSWER,
    EVENT_FAILURE,
    EVENT_PLAN_READY,
    EVENT_TASK_FINISHED,
    EVENT_TASK_STARTED,
    EVENT_VERDICT,
    ExecutionBudget,
    extract_answer,
)
from .executor import execute_plan, select_tool
from .planner import plan_query, replan
from .types import (
    APPROVE,
    Binding,
    ExecutionTrace,
    FINAL_FAILED,
    FINAL_OK,
    MetaTask,
    MetaTaskPlan,
    Objective,
    REJECT,
    RoundRecord,
    TASK_ERROR,
    TASK_OK,
    TASK_SKIPPED,
    TaskOutcome,
    ToolSelection,
    UserQuery,
    Verdict,
)
from .verifier import verify_plan, verify_results

__all__ = [
    "APPROVE",
    "Binding",
    "EVENT_ANSWER",
    "EVENT_FAILURE",
    "EVENT_PLAN_READY",
    "EVENT_TASK_FINISHED",
    "EVENT_TASK_STARTED",
    "EVENT_VERDICT",
    "Engine",
    "ExecutionBudget",
    "ExecutionTrace",
    "FINAL_FAILED",
    "FINAL_OK",
    "MetaTask",
    "MetaTaskPlan",
    "Objective",
    "REJECT",
    "RoundRecord",
    "TASK_ERROR",
    "TASK_OK",
    "TASK_SKIPPED",
    "TaskOutcome",
    "ToolSelection",
    "UserQuery",
    "Verdict",
    "execute_plan",
    "extract_answer",
    "plan_query",
    "replan",
    "select_tool",
    "verify_plan",
    "verify_results",
]
