"""Result aggregation: clustering, the confidence mechanism, and the
two-stage motion-aware mechanism.

The confidence mechanism clusters similar analyses and lets the cluster with
the largest summed predefined confidence win. All tie-breaks are on
normalized text, so the outcome is independent of input order and of any
positive rescaling of the confidences.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from ..backends.base import Backend, ModelRequest, Schema
from ..errors import EmptyInput, SpecialistFailure
from ..media import MediaRef
from ..text import is_option_shaped, jaccard, normalize, tokens
from .analyzer import ScoredResult


@dataclass(frozen=True)
class ExactMatch:
    """Group by normalized text equality."""


@dataclass(frozen=True)
class TokenOverlap:
    """Single-link grouping on Jaccard similarity of token sets."""

    threshold: float = 0.5


class AggregationMethod(str, enum.Enum):
    CONFIDENCE = "confidence_mechanism"
    MOTION_AWARE = "motion_aware"


@dataclass(frozen=True)
class StageRecord:
    stage: str
    model_id: str
    output_text: str

    def to_dict(self) -> dict:
        return {"stage": self.stage, "model_id": self.model_id, "output_text": self.output_text}


@dataclass(frozen=True)
class AggregatedResult:
    final_text: str
    method: AggregationMethod
    winning_cluster: tuple[str, ...]
    support_mass: float
    preliminary: str | None = None
    degraded: bool = False
    stages: tuple[StageRecord, ...] = field(default=())

    def __post_init__(self):
        if not self.final_text:
            raise ValueError("aggregated final_text must be non-empty")
        if self.method == AggregationMethod.MOTION_AWARE and self.preliminary is None:
            raise ValueError("motion-aware results must carry the preliminary estimate")
        if self.support_mass < 0:
            raise ValueError("support_mass must be >= 0")

    def to_dict(self) -> dict:
        return {
            "final_text": self.final_text,
            "method": self.method.value,
            "winning_cluster": list(self.winning_cluster),
            "support_mass": self.support_mass,
            "preliminary": self.preliminary,
            "degraded": self.degraded,
            "stages": [s.to_dict() for s in self.stages],
        }


def cluster_results(results: list[ScoredResult],
                    mode: ExactMatch | TokenOverlap) -> list[list[ScoredResult]]:
    """Partition results into clusters of similar texts.

    Clusters are ordered by first appearance and keep input order inside;
    single-link TokenOverlap grouping is order-independent by construction.
    """
    if not results:
        raise EmptyInput("cluster_results requires at least one result")
    n = len(results)
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i: int, j: int) -> None:
        parent[find(i)] = find(j)

    if isinstance(mode, ExactMatch):
        seen: dict[str, int] = {}
        for i, result in enumerate(results):
            key = normalize(result.text)
            if key in seen:
                union(i, seen[key])
            else:
                seen[key] = i
    else:
        token_sets = [tokens(r.text) for r in results]
        for i in range(n):
            for j in range(i + 1, n):
                if jaccard(token_sets[i], token_sets[j]) >= mode.threshold:
                    union(i, j)

    groups: dict[int, list[ScoredResult]] = {}
    order: list[int] = []
    for i, result in enumerate(results):
        root = find(i)
        if root not in groups:
            groups[root] = []
            order.append(root)
        groups[root].append(result)
    return [groups[root] for root in order]


def default_cluster_mode(results: list[ScoredResult]) -> ExactMatch | TokenOverlap:
    """ExactMatch when every answer is a bare option token, else TokenOverlap(0.5)."""
    if all(is_option_shaped(r.text) for r in results):
        return ExactMatch()
    return TokenOverlap(0.5)


def _cluster_mass(cluster: list[ScoredResult]) -> float:
    # fsum: exact accumulation, so the mass is independent of member order.
    return math.fsum(r.confidence for r in cluster)


def _cluster_sort_key(cluster: list[ScoredResult]) -> tuple:
    # Mass first; the remaining components are order-free text tie-breaks.
    # Masses are compared on a coarse grid so that sums which tie in decimal
    # (but differ by float noise) stay tied under positive rescaling.
    norms = sorted(normalize(r.text) for r in cluster)
    ids = sorted(r.model_id for r in cluster)
    return (-round(_cluster_mass(cluster), 9), norms[0], norms, ids)


def _best_member(cluster: list[ScoredResult]) -> ScoredResult:
    return min(cluster, key=lambda r: (-r.confidence, normalize(r.text), r.text, r.model_id))


def pick_winner(results: list[ScoredResult]) -> tuple[list[ScoredResult], ScoredResult]:
    """Deterministic confidence-mechanism winner: (cluster, representative)."""
    clusters = cluster_results(results, default_cluster_mode(results))
    winner = min(clusters, key=_cluster_sort_key)
    return winner, _best_member(winner)


def aggregate_confidence(results: list[ScoredResult],
                         reasoner: Backend | None = None,
                         role_prompt: str = "") -> AggregatedResult:
    """Majority-wins aggregation weighted by predefined confidences.

    Without a reasoner the deterministic path decides everything. With one,
    the candidate pairs are handed over with the deterministic winner as a
    fallback anchor; whatever comes back is constrained to be a member of
    some input cluster, and any reasoner trouble degrades to the anchor.
    """
    if not results:
        raise EmptyInput("aggregate_confidence requires at least one result")
    winning, member = pick_winner(results)
    final_text = member.text

    if reasoner is not None:
        request = ModelRequest(
            schema_tag=Schema.AGGREGATE,
            payload={
                "candidates": [r.to_dict() for r in results],
                "anchor": final_text,
            },
            role_prompt=role_prompt,
        )
        try:
            response = reasoner.invoke(request)
        except Exception:
            response = None
        if response is not None and response.text:
            chosen_norm = normalize(response.text)
            members = [r for r in results if normalize(r.text) == chosen_norm]
            if members:
                member = _best_member(members)
                final_text = member.text
                clusters = cluster_results(results, default_cluster_mode(results))
                winning = next(c for c in clusters if member in c)

    return AggregatedResult(
        final_text=final_text,
        method=AggregationMethod.CONFIDENCE,
        winning_cluster=tuple(sorted(r.model_id for r in winning)),
        support_mass=_cluster_mass(winning),
    )


def aggregate_motion_aware(results: list[ScoredResult], media: MediaRef,
                           specialist: Backend, reasoner: Backend,
                           specialist_prompt: str = "",
                           reasoner_prompt: str = "") -> AggregatedResult:
    """Two-stage aggregation: specialist preliminary estimate, then reasoner refinement.

    The specialist sees the candidate pairs plus the raw media and produces a
    preliminary estimate; the reasoner re-examines it against the pairs. A
    stage-2 failure degrades to the preliminary estimate instead of erroring.
    """
    if not results:
        raise EmptyInput("aggregate_motion_aware requires at least one result")
    candidates = [r.to_dict() for r in results]

    stage1 = ModelRequest(
        schema_tag=Schema.PRELIMINARY,
        payload={"candidates": candidates, "media": media.to_dict()},
        role_prompt=specialist_prompt,
    )
    try:
        preliminary_response = specialist.invoke(stage1)
    except Exception as exc:
        raise SpecialistFailure(exc) from exc
    preliminary = preliminary_response.text
    if not preliminary:
        raise SpecialistFailure(ValueError("specialist returned an empty preliminary estimate"))
    stages = [StageRecord("specialist", specialist.model_id, preliminary)]

    stage2 = ModelRequest(
        schema_tag=Schema.REFINE,
        payload={"preliminary": preliminary, "candidates": candidates},
        role_prompt=reasoner_prompt,
    )
    degraded = False
    try:
        refined_response = reasoner.invoke(stage2)
        final_text = refined_response.text or preliminary
        degraded = not refined_response.text
        stages.append(StageRecord("reasoner", reasoner.model_id, refined_response.text))
    except Exception:
        final_text = preliminary
        degraded = True

    final_norm = normalize(final_text)
    winning_ids: tuple[str, ...] = ()
    support = 0.0
    for cluster in cluster_results(results, default_cluster_mode(results)):
        if any(normalize(r.text) == final_norm for r in cluster):
            winning_ids = tuple(sorted(r.model_id for r in cluster))
            support = _cluster_mass(cluster)
            break

    return AggregatedResult(
        final_text=final_text,
        method=AggregationMethod.MOTION_AWARE,
        winning_cluster=winning_ids,
        support_mass=support,
        preliminary=preliminary,
        degraded=degraded,
        stages=tuple(stages),
    )
