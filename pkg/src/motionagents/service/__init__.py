"""HTTP service, durable storage, configuration, and the command line."""

from .config import (
    EngineBundle,
    EngineConfig,
    STORAGE_ENV,
    build_backend,
    build_bundle,
    load_config,
    resolve_storage_root,
)
from .events import EventCollector, parse_sse, sse_format
from .storage import MEDIA_LIMIT_BYTES, SessionStore, media_ref_for_file

__all__ = [
    "EngineBundle",
    "EngineConfig",
    "EventCollector",
    "MEDIA_LIMIT_BYTES",
    "STORAGE_ENV",
    "SessionStore",
    "build_backend",
    "build_bundle",
    "load_config",
    "media_ref_for_file",
    "parse_sse",
    "resolve_storage_root",
    "sse_format",
]
