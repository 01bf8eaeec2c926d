"""
Motion retrieval and knowledge-base lookup
==========================================

The engine can answer two auxiliary kinds of question: "find me a motion
like this" against a store of labeled motion embeddings, and "any advice?"
against a file of coaching passages. This script builds both corpora on
disk, points a config at them, and sends the trigger queries through a
full turn. Embeddings come from the deterministic hashing embedder, so the
nearest neighbors are the same on every run.
"""

import tempfile
from pathlib import Path

from motionagents.agents.types import UserQuery
from motionagents.backends.base import BackendKind, ModelRequest, Schema
from motionagents.backends.template import TemplateBackend
from motionagents.media import MediaRef
from motionagents.motioncore.retrieval import (
    KnowledgeBase,
    MotionStore,
    MotionStoreItem,
    Passage,
)
from motionagents.service.config import EngineConfig, build_bundle

workdir = Path(tempfile.mkdtemp(prefix="motiondemo-"))

# Index a small library: each clip is embedded by its label with the same
# embedder the engine will use, so query and store vectors line up.
embedder = TemplateBackend("template-embedder", BackendKind.EMBEDDER, seed=0)
labels = {
    "clip-squat": "deep squat with barbell",
    "clip-jump": "standing broad jump",
    "clip-wave": "waving with both hands",
    "clip-lunge": "forward lunge alternating legs",
}
store = MotionStore()
for item_id, label in labels.items():
    reply = embedder.invoke(ModelRequest(schema_tag=Schema.EMBED, payload={"texts": [label]}))
    store.add(MotionStoreItem(item_id, label, tuple(reply.structured["vectors"][0]),
                              MediaRef(item_id, motion_path=f"{item_id}.npy")))
store.save(str(workdir / "motions"))
print(f"indexed {len(store)} motions ({store.dim}-dim embeddings)")

# A few coaching passages, scored later by token overlap with the question.
kb = KnowledgeBase([
    Passage("p1", "squat depth", "keep heels planted and drive the hips back in a squat"),
    Passage("p2", "jump landing", "land a jump softly with bent knees"),
    Passage("p3", "warmup", "warm up shoulders before overhead work"),
])
kb.save(str(workdir / "knowledge.jsonl"))
print(f"wrote {len(kb)} knowledge passages")

config = EngineConfig.from_dict({
    **EngineConfig.template_default().to_dict(),
    "tools": ["analyze_motion", "count_repetitions", "aggregate",
              "generate_answer", "retrieve_motion", "lookup_knowledge"],
    "motion_store_dir": str(workdir / "motions"),
    "knowledge_file": str(workdir / "knowledge.jsonl"),
    "retrieval_k": 2,
})
bundle = build_bundle(config)

# "similar" routes the plan through the retrieval tool.
query = UserQuery(text="Please look up a motion similar to a barbell squat.")
trace = bundle.engine.run_turn(query, turn_id="retrieval:0")
print(f"\nretrieval turn -> {trace.final_status}")
print(f"  {trace.answer}")

# "advice" routes it through the knowledge base instead.
query = UserQuery(text="Any advice on how deep a squat should be?")
trace = bundle.engine.run_turn(query, turn_id="knowledge:0")
print(f"\nknowledge turn -> {trace.final_status}")
print(f"  {trace.answer}")
