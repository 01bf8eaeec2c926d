"""Tool registry and catalog views.

Registration order is meaningful: it is the tie-break for deterministic tool
selection, so reads preserve it.
"""

from __future__ import annotations

import enum
import threading
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Callable

from ..errors import DuplicateToolId

if TYPE_CHECKING:
    from ..agents.types import UserQuery


class CostHint(str, enum.Enum):
    CHEAP = "cheap"
    MODEL_CALL = "model_call"
    MULTI_MODEL_CALL = "multi_model_call"


@dataclass(frozen=True)
class ToolDescriptor:
    tool_id: str
    capabilities: frozenset[str]
    description: str
    input_schema: dict[str, str] = field(default_factory=dict)
    cost_hint: CostHint = CostHint.CHEAP

    def __post_init__(self):
        if not self.tool_id:
            raise ValueError("tool_id must be non-empty")
        if not self.capabilities:
            raise ValueError(f"tool {self.tool_id!r} must advertise at least one capability")

    def to_dict(self) -> dict:
        return {
            "tool_id": self.tool_id,
            "capabilities": sorted(self.capabilities),
            "description": self.description,
            "input_schema": dict(self.input_schema),
            "cost_hint": self.cost_hint.value,
        }


@dataclass(frozen=True)
class UpstreamEntry:
    """Output of a completed dependency, in completion order."""

    task_id: str
    tool_id: str
    payload: dict


@dataclass
class ToolCall:
    """Everything a tool handler gets to see for one meta-task."""

    task_id: str
    capability: str
    query: "UserQuery"
    inputs: list[dict]
    upstream: list[UpstreamEntry]
    services: Any = None

    def first_media(self):
        for binding in self.inputs:
            if binding.get("kind") == "media" and binding.get("resolved") is not None:
                return binding["resolved"]
        return None

    def literals(self) -> list:
        return [b["value"] for b in self.inputs if b.get("kind") == "literal"]


ToolHandler = Callable[[ToolCall], dict]


class CatalogSnapshot:
    """Immutable, registration-ordered view of the enabled tools."""

    def __init__(self, descriptors: tuple[ToolDescriptor, ...]):
        self._descriptors = descriptors
        self._by_id = {d.tool_id: d for d in descriptors}

    def descriptors(self) -> tuple[ToolDescriptor, ...]:
        return self._descriptors

    def get(self, tool_id: str) -> ToolDescriptor | None:
        return self._by_id.get(tool_id)

    def find_capability(self, capability: str) -> list[ToolDescriptor]:
        return [d for d in self._descriptors if capability in d.capabilities]

    def capabilities(self) -> set[str]:
        caps: set[str] = set()
        for d in self._descriptors:
            caps.update(d.capabilities)
        return caps

    def __len__(self) -> int:
        return len(self._descriptors)

    def to_payload(self) -> list[dict]:
        """Catalog summary embedded in planner payloads."""
        return [
            {
                "tool_id": d.tool_id,
                "capabilities": sorted(d.capabilities),
                "description": d.description,
            }
            for d in self._descriptors
        ]


class ToolRegistry:
    """Mutable registry; reads are safe under concurrent access, writes serialized."""

    def __init__(self):
        self._entries: list[tuple[ToolDescriptor, ToolHandler]] = []
        self._disabled: set[str] = set()
        self._lock = threading.Lock()

    def register(self, descriptor: ToolDescriptor, handler: ToolHandler) -> None:
        with self._lock:
            if any(d.tool_id == descriptor.tool_id for d, _ in self._entries):
                raise DuplicateToolId(f"tool id {descriptor.tool_id!r} already registered")
            self._entries.append((descriptor, handler))

    def disable(self, tool_id: str) -> None:
        with self._lock:
            if not any(d.tool_id == tool_id for d, _ in self._entries):
                raise KeyError(tool_id)
            self._disabled.add(tool_id)

    def enable(self, tool_id: str) -> None:
        with self._lock:
            self._disabled.discard(tool_id)

    def is_disabled(self, tool_id: str) -> bool:
        return tool_id in self._disabled

    def catalog(self) -> CatalogSnapshot:
        """Snapshot of currently enabled tools; later registry edits do not leak in."""
        with self._lock:
            return CatalogSnapshot(
                tuple(d for d, _ in self._entries if d.tool_id not in self._disabled)
            )

    def all_descriptors(self) -> list[ToolDescriptor]:
        with self._lock:
            return [d for d, _ in self._entries]

    def handler_for(self, tool_id: str) -> ToolHandler:
        with self._lock:
            for descriptor, handler in self._entries:
                if descriptor.tool_id == tool_id:
                    return handler
        raise KeyError(tool_id)


def register_tool(registry: ToolRegistry, descriptor: ToolDescriptor,
                  handler: ToolHandler) -> ToolDescriptor:
    """Register and return the descriptor; duplicate ids are rejected."""
    registry.register(descriptor, handler)
    return descriptor
