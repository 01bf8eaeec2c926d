"""
Fusing disagreeing model outputs
================================

Several analysis models answer the same question with different texts and
different predefined trust weights. The confidence mechanism clusters
similar answers and lets the cluster with the largest summed confidence
win; the motion-aware mechanism instead asks a motion specialist for a
preliminary estimate and a reasoner to refine it, degrading gracefully
when the second stage misbehaves.
"""

from motionagents.backends.base import BackendKind
from motionagents.backends.mock import MockBackend, MockScript, ScriptEntry
from motionagents.backends.template import TemplateBackend
from motionagents.media import MediaRef
from motionagents.motioncore.aggregate import (
    aggregate_confidence,
    aggregate_motion_aware,
    cluster_results,
    default_cluster_mode,
)
from motionagents.motioncore.analyzer import ScoredResult

# Three models, two of which roughly agree. Confidences are configured per
# model ahead of time; they are trust weights, not per-answer certainty.
results = [
    ScoredResult("model-a", "the person jumps over the box", 0.6),
    ScoredResult("model-b", "the person is jumping over a box", 0.5),
    ScoredResult("model-c", "someone waves both hands", 0.9),
]

print("clusters of similar answers:")
for cluster in cluster_results(results, default_cluster_mode(results)):
    mass = sum(r.confidence for r in cluster)
    print(f"  mass {mass:.1f}: {[r.model_id for r in cluster]}")

# Majority wins by summed confidence: 0.6 + 0.5 beats 0.9 even though
# model-c is individually the most trusted.
aggregated = aggregate_confidence(results)
print(f"\nconfidence mechanism picks: {aggregated.final_text!r}")
print(f"  winning cluster: {aggregated.winning_cluster}, mass {aggregated.support_mass:.1f}")

# Reordering the inputs or rescaling every confidence by the same factor
# never changes the winner.
rescaled = [ScoredResult(r.model_id, r.text, r.confidence / 10) for r in reversed(results)]
assert aggregate_confidence(rescaled).final_text == aggregated.final_text
print("  invariant under input order and uniform rescaling: confirmed")

# The motion-aware mechanism re-examines the candidates against the raw
# media: stage one is a motion specialist, stage two a general reasoner.
media = MediaRef("clip-7", motion_path="clip-7.npy")
specialist = TemplateBackend("specialist", BackendKind.MOTION_SPECIALIST)
reasoner = TemplateBackend("reasoner", BackendKind.REASONER)
staged = aggregate_motion_aware(results, media, specialist, reasoner)
print(f"\nmotion-aware mechanism picks: {staged.final_text!r}")
print(f"  preliminary estimate: {staged.preliminary!r}")
print(f"  stages: {[s.stage for s in staged.stages]}, degraded: {staged.degraded}")

# If the refinement stage fails, the turn does not: the preliminary
# estimate is kept and flagged as degraded.
broken_script = MockScript()
broken_script.add("refine", ScriptEntry(error="transport", error_message="refiner offline"))
broken = MockBackend("broken-reasoner", BackendKind.REASONER, broken_script)
degraded = aggregate_motion_aware(results, media, specialist, broken)
print(f"\nwith a failing refiner: {degraded.final_text!r} (degraded={degraded.degraded})")
