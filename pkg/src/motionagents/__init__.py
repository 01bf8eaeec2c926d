"""Agent-orchestrated human motion understanding.

A reasoner decomposes each user query into verified meta-task plans, tools
fan analysis out across motion and video models, and confidence-weighted
aggregation fuses their answers. Every model dependency sits behind a
pluggable backend, so the whole pipeline runs deterministically offline.
"""

from .agents import Engine, ExecutionBudget, ExecutionTrace, UserQuery
from .backends import (
    Backend,
    BackendKind,
    ConfidenceTable,
    MockBackend,
    ModelRequest,
    ModelResponse,
    ReplayBackend,
    Schema,
    TemplateBackend,
)
from .errors import MotionAgentsError
from .media import MediaRef, Modality
from .motioncore import (
    AggregatedResult,
    ScoredResult,
    ToolRegistry,
    ToolServices,
    aggregate_confidence,
    aggregate_motion_aware,
    build_standard_registry,
)

__version__ = "0.1.0"

__all__ = [
    "AggregatedResult",
    "Backend",
    "BackendKind",
    "ConfidenceTable",
    "Engine",
    "ExecutionBudget",
    "ExecutionTrace",
    "MediaRef",
    "MockBackend",
    "Modality",
    "ModelRequest",
    "ModelResponse",
    "MotionAgentsError",
    "ReplayBackend",
    "Schema",
    "ScoredResult",
    "TemplateBackend",
    "ToolRegistry",
    "ToolServices",
    "UserQuery",
    "aggregate_confidence",
    "aggregate_motion_aware",
    "build_standard_registry",
    "__version__",
]
