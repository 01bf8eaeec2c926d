"""Auxiliary retrieval tools: vector motion search and knowledge-base lookup."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import DimensionMismatch, EmptyKnowledgeBase, EmptyStore
from ..media import MediaRef
from ..text import tokens


@dataclass(frozen=True)
class MotionStoreItem:
    item_id: str
    label: str
    embedding: tuple[float, ...]
    media: MediaRef

    def to_dict(self) -> dict:
        return {
            "item_id": self.item_id,
            "label": self.label,
            "embedding": list(self.embedding),
            "media": {"media_id": self.media.media_id,
                      "motion_path": self.media.motion_path,
                      "video_path": self.media.video_path},
        }


class MotionStore:
    """Labeled motion embeddings, linear-scanned at desk scale.

    All embeddings share one dimension and have positive norm; both are
    checked at insert time.
    """

    def __init__(self):
        self._items: list[MotionStoreItem] = []
        self._dim: int | None = None

    def add(self, item: MotionStoreItem) -> None:
        vec = np.asarray(item.embedding, dtype=float)
        if self._dim is None:
            self._dim = vec.shape[0]
        elif vec.shape[0] != self._dim:
            raise DimensionMismatch(self._dim, vec.shape[0])
        if np.linalg.norm(vec) == 0.0:
            raise ValueError(f"item {item.item_id!r} has a zero embedding")
        self._items.append(item)

    def __len__(self) -> int:
        return len(self._items)

    @property
    def dim(self) -> int | None:
        return self._dim

    @property
    def items(self) -> list[MotionStoreItem]:
        return list(self._items)

    def save(self, directory: str) -> None:
        path = Path(directory)
        path.mkdir(parents=True, exist_ok=True)
        with open(path / "items.jsonl", "w", encoding="utf-8") as fh:
            for item in self._items:
                fh.write(json.dumps(item.to_dict(), sort_keys=True) + "\n")

    @classmethod
    def load(cls, directory: str) -> "MotionStore":
        store = cls()
        with open(Path(directory) / "items.jsonl", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                data = json.loads(line)
                media = data["media"]
                store.add(
                    MotionStoreItem(
                        item_id=data["item_id"],
                        label=data["label"],
                        embedding=tuple(float(x) for x in data["embedding"]),
                        media=MediaRef(
                            media_id=media["media_id"],
                            motion_path=media.get("motion_path"),
                            video_path=media.get("video_path"),
                        ),
                    )
                )
        return store


def retrieve_motion(query_embedding, store: MotionStore,
                    k: int) -> list[tuple[MotionStoreItem, float]]:
    """Top-k items by cosine similarity, ties broken by item_id ascending."""
    if k < 1:
        raise ValueError("k must be positive")
    if len(store) == 0:
        raise EmptyStore("motion store is empty")
    query = np.asarray(query_embedding, dtype=float)
    if query.shape[0] != store.dim:
        raise DimensionMismatch(store.dim, query.shape[0])
    query_norm = np.linalg.norm(query)
    if query_norm == 0.0:
        raise ValueError("query embedding has zero norm")

    scored = []
    for item in store.items:
        vec = np.asarray(item.embedding, dtype=float)
        similarity = float(np.dot(query, vec) / (query_norm * np.linalg.norm(vec)))
        scored.append((item, similarity))
    scored.sort(key=lambda pair: (-pair[1], pair[0].item_id))
    return scored[: min(k, len(scored))]


@dataclass(frozen=True)
class Passage:
    passage_id: str
    title: str
    text: str


class KnowledgeBase:
    """Passages scored by token overlap with the question."""

    def __init__(self, passages: list[Passage] | None = None):
        self._passages = list(passages or [])

    def __len__(self) -> int:
        return len(self._passages)

    @property
    def passages(self) -> list[Passage]:
        return list(self._passages)

    @classmethod
    def load(cls, path: str) -> "KnowledgeBase":
        passages = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                data = json.loads(line)
                passages.append(Passage(passage_id=data["id"], title=data.get("title", ""),
                                        text=data["text"]))
        return cls(passages)

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for p in self._passages:
                fh.write(json.dumps({"id": p.passage_id, "title": p.title, "text": p.text},
                                    sort_keys=True) + "\n")


def lookup_knowledge(question: str, kb: KnowledgeBase, k: int) -> list[tuple[Passage, int]]:
    """Top-k passages by overlap score, id-ascending on ties."""
    if k < 1:
        raise ValueError("k must be positive")
    if len(kb) == 0:
        raise EmptyKnowledgeBase("knowledge base has no passages")
    question_tokens = tokens(question)
    scored = []
    for passage in kb.passages:
        passage_tokens = tokens(passage.title + " " + passage.text)
        scored.append((passage, len(question_tokens & passage_tokens)))
    scored.sort(key=lambda pair: (-pair[1], pair[0].passage_id))
    return scored[: min(k, len(scored))]
