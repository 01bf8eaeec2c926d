"""Shared fixtures: scripted backends and fully wired template engines."""

from __future__ import annotations

import json

import pytest

from motionagents.backends.base import BackendKind
from motionagents.backends.mock import MockBackend, MockScript, ScriptEntry
from motionagents.backends.template import TemplateBackend
from motionagents.motioncore.analyzer import ScoredResult
from motionagents.service.config import EngineConfig, build_bundle


def make_mock(model_id: str, kind=BackendKind.REASONER, **tag_entries) -> MockBackend:
    """Mock backend from keyword scripts.

    Values may be ScriptEntry, dict (structured), str (text), or a list of
    those; dict values become both text JSON and structured fields.
    """
    script = MockScript()
    for tag, value in tag_entries.items():
        entries = value if isinstance(value, list) else [value]
        for entry in entries:
            if isinstance(entry, ScriptEntry):
                script.add(tag, entry)
            elif isinstance(entry, dict):
                script.add(tag, ScriptEntry(text=json.dumps(entry), structured=entry))
            else:
                script.add(tag, ScriptEntry(text=str(entry)))
    return MockBackend(model_id, kind, script)


def scored(model_id: str, text: str, confidence: float) -> ScoredResult:
    return ScoredResult(model_id=model_id, text=text, confidence=confidence)


@pytest.fixture
def template_reasoner() -> TemplateBackend:
    return TemplateBackend("template-reasoner", BackendKind.REASONER)


@pytest.fixture
def template_bundle():
    return build_bundle(EngineConfig.template_default())


@pytest.fixture
def template_config() -> EngineConfig:
    return EngineConfig.template_default()
