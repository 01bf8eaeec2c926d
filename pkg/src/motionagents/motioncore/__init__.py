"""Motion analysis core: tools, multi-model analysis, and aggregation."""

from .aggregate import (
    AggregatedResult,
    AggregationMethod,
    ExactMatch,
    StageRecord,
    TokenOverlap,
    aggregate_confidence,
    aggregate_motion_aware,
    cluster_results,
    default_cluster_mode,
    pick_winner,
)
from .analyzer import AnalysisRequest, ScoredResult, analyze
from .generate import AnswerPayload, ContextEntry, GenerationContext, generate_answer
from .registry import (
    CatalogSnapshot,
    CostHint,
    ToolCall,
    ToolDescriptor,
    ToolRegistry,
    UpstreamEntry,
    register_tool,
)
from .retrieval import (
    KnowledgeBase,
    MotionStore,
    MotionStoreItem,
    Passage,
    lookup_knowledge,
    retrieve_motion,
)
from .tools import (
    STANDARD_TOOLS,
    ToolServices,
    build_standard_registry,
    failing_handler,
    payload_summary,
)

__all__ = [
    "AggregatedResult",
    "AggregationMethod",
    "AnalysisRequest",
    "AnswerPayload",
    "CatalogSnapshot",
    "ContextEntry",
    "CostHint",
    "ExactMatch",
    "GenerationContext",
    "KnowledgeBase",
    "MotionStore",
    "MotionStoreItem",
    "Passage",
    "STANDARD_TOOLS",
    "ScoredResult",
    "StageRecord",
    "TokenOverlap",
    "ToolCall",
    "ToolDescriptor",
    "ToolRegistry",
    "ToolServices",
    "UpstreamEntry",
    "aggregate_confidence",
    "aggregate_motion_aware",
    "analyze",
    "build_standard_registry",
    "cluster_results",
    "default_cluster_mode",
    "failing_handler",
    "generate_answer",
    "lookup_knowledge",
    "payload_summary",
    "pick_winner",
    "register_tool",
    "retrieve_motion",
]
