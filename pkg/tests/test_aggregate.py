"""Clustering and aggregation: oracle comparisons, tie-breaks, staging."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from motionagents.backends.base import BackendKind
from motionagents.errors import EmptyInput, SpecialistFailure
from motionagents.media import MediaRef
from motionagents.motioncore.aggregate import (
    AggregatedResult,
    AggregationMethod,
    ExactMatch,
    TokenOverlap,
    aggregate_confidence,
    aggregate_motion_aware,
    cluster_results,
    default_cluster_mode,
    pick_winner,
)
from motionagents.text import jaccard, normalize, tokens

from conftest import make_mock, scored

MEDIA = MediaRef("m1", motion_path="clip.npy")


def oracle_partition(texts: list[str], mode) -> set[frozenset[int]]:
    """Reference clustering: connected components by breadth-first search."""
    n = len(texts)
    if isinstance(mode, ExactMatch):
        def linked(i, j):
            return normalize(texts[i]) == normalize(texts[j])
    else:
        sets = [tokens(t) for t in texts]

        def linked(i, j):
            return jaccard(sets[i], sets[j]) >= mode.threshold

    unassigned = set(range(n))
    components = set()
    while unassigned:
        seed = min(unassigned)
        component = {seed}
        frontier = [seed]
        while frontier:
            current = frontier.pop()
            for other in list(unassigned - component):
                if linked(current, other):
                    component.add(other)
                    frontier.append(other)
        unassigned -= component
        components.add(frozenset(component))
    return components


def partition_from_clusters(clusters, results) -> set[frozenset[int]]:
    index = {id(r): i for i, r in enumerate(results)}
    return {frozenset(index[id(r)] for r in cluster) for cluster in clusters}


SAMPLE_TEXTS = ["the man jumps high", "man jumps", "sits down",
                "a person sits down slowly", "b", "(b)", "waves both arms"]


@given(st.lists(st.sampled_from(SAMPLE_TEXTS), min_size=1, max_size=6),
       st.sampled_from([ExactMatch(), TokenOverlap(0.5), TokenOverlap(0.2),
                        TokenOverlap(0.9)]))
@settings(max_examples=200)
def test_clustering_matches_bfs_oracle(texts, mode):
    results = [scored(f"m{i}", t, 0.5) for i, t in enumerate(texts)]
    clusters = cluster_results(results, mode)
    assert partition_from_clusters(clusters, results) == oracle_partition(texts, mode)


def test_cluster_results_empty_input():
    with pytest.raises(EmptyInput):
        cluster_results([], TokenOverlap())


def test_jaccard_boundary_is_inclusive():
    # {the, man, jumps, high} vs {man, jumps}: similarity exactly 0.5
    results = [scored("a", "the man jumps high", 0.5),
               scored("b", "man jumps", 0.5)]
    clusters = cluster_results(results, TokenOverlap(0.5))
    assert len(clusters) == 1


def test_default_mode_exact_for_option_answers():
    assert isinstance(default_cluster_mode(
        [scored("a", "b", 0.5), scored("b", "(c)", 0.4)]), ExactMatch)
    assert isinstance(default_cluster_mode(
        [scored("a", "b", 0.5), scored("b", "the man jumps", 0.4)]), TokenOverlap)


def test_winner_by_summed_confidence():
    results = [
        scored("m1", "the man jumps high", 0.6),
        scored("m2", "man jumps", 0.3),
        scored("m3", "sits down", 0.8),
    ]
    cluster, member = pick_winner(results)
    assert {r.model_id for r in cluster} == {"m1", "m2"}
    assert member.text == "the man jumps high"
    aggregated = aggregate_confidence(results)
    assert aggregated.final_text == "the man jumps high"
    assert aggregated.winning_cluster == ("m1", "m2")
    assert aggregated.support_mass == pytest.approx(0.9)
    assert aggregated.method is AggregationMethod.CONFIDENCE


def test_mass_tie_breaks_on_normalized_text():
    results = [scored("m1", "walks forward", 0.5),
               scored("m2", "turns around", 0.5)]
    aggregated = aggregate_confidence(results)
    # "turns around" < "walks forward" lexicographically
    assert aggregated.final_text == "turns around"


def test_representative_tie_breaks_on_text_then_model():
    results = [scored("mB", "Man Jumps", 0.5), scored("mA", "man jumps", 0.5)]
    _, member = pick_winner(results)
    # equal confidence and equal normalized text: raw text tie-break
    assert member.model_id == "mB"
    tied = [scored("mB", "man jumps", 0.5), scored("mA", "man jumps", 0.5)]
    _, member = pick_winner(tied)
    assert member.model_id == "mA"


@given(st.lists(
    st.tuples(st.sampled_from(SAMPLE_TEXTS),
              st.integers(min_value=1, max_value=9)),
    min_size=1, max_size=6), st.randoms())
@settings(max_examples=150)
def test_confidence_aggregation_permutation_invariant(pairs, rng):
    results = [scored(f"m{i}", text, conf / 10.0)
               for i, (text, conf) in enumerate(pairs)]
    baseline = aggregate_confidence(results)
    shuffled = list(results)
    rng.shuffle(shuffled)
    again = aggregate_confidence(shuffled)
    assert again.final_text == baseline.final_text
    assert again.winning_cluster == baseline.winning_cluster
    assert again.support_mass == pytest.approx(baseline.support_mass)


@given(st.lists(
    st.tuples(st.sampled_from(SAMPLE_TEXTS),
              st.integers(min_value=1, max_value=9)),
    min_size=1, max_size=5),
    st.sampled_from([0.1, 2.0, 10.0]))
@settings(max_examples=150)
def test_confidence_aggregation_scale_invariant(pairs, scale):
    # base confidences stay in (0, 0.1] so every scale factor keeps them valid
    results = [scored(f"m{i}", text, conf / 100.0)
               for i, (text, conf) in enumerate(pairs)]
    scaled = [scored(r.model_id, r.text, r.confidence * scale) for r in results]
    baseline = aggregate_confidence(results)
    rescaled = aggregate_confidence(scaled)
    assert rescaled.final_text == baseline.final_text
    assert rescaled.winning_cluster == baseline.winning_cluster
    assert rescaled.support_mass == pytest.approx(baseline.support_mass * scale)


def test_reasoner_choice_constrained_to_candidates():
    results = [scored("m1", "jumps", 0.9), scored("m2", "sits", 0.2)]
    follows = make_mock("r", aggregate=["sits"])
    aggregated = aggregate_confidence(results, reasoner=follows)
    assert aggregated.final_text == "sits"
    assert aggregated.winning_cluster == ("m2",)

    invents = make_mock("r", aggregate=["cartwheels"])
    aggregated = aggregate_confidence(results, reasoner=invents)
    assert aggregated.final_text == "jumps"


def test_reasoner_failure_degrades_to_anchor():
    results = [scored("m1", "jumps", 0.9), scored("m2", "sits", 0.2)]
    broken = make_mock("r")  # no script: every invoke raises
    aggregated = aggregate_confidence(results, reasoner=broken)
    assert aggregated.final_text == "jumps"


def test_aggregate_confidence_empty_input():
    with pytest.raises(EmptyInput):
        aggregate_confidence([])


def test_motion_aware_two_stages_in_order():
    results = [scored("m1", "jumps high", 0.4), scored("m2", "sits", 0.6)]
    specialist = make_mock("spec", BackendKind.MOTION_SPECIALIST,
                           preliminary=["jumps high"])
    reasoner = make_mock("reason", BackendKind.REASONER, refine=["jumps high"])
    aggregated = aggregate_motion_aware(results, MEDIA, specialist, reasoner)

    assert aggregated.method is AggregationMethod.MOTION_AWARE
    assert aggregated.preliminary == "jumps high"
    assert aggregated.final_text == "jumps high"
    assert not aggregated.degraded
    assert [s.stage for s in aggregated.stages] == ["specialist", "reasoner"]
    # the specialist saw candidates plus the raw media reference
    assert specialist.calls[0].payload["media"] == MEDIA.to_dict()
    assert len(specialist.calls[0].payload["candidates"]) == 2
    # the reasoner ran after and saw the preliminary estimate
    assert reasoner.calls[0].payload["preliminary"] == "jumps high"
    assert aggregated.winning_cluster == ("m1",)
    assert aggregated.support_mass == pytest.approx(0.4)


def test_motion_aware_stage2_failure_degrades():
    results = [scored("m1", "jumps high", 0.4)]
    specialist = make_mock("spec", BackendKind.MOTION_SPECIALIST,
                           preliminary=["jumps high"])
    broken_reasoner = make_mock("reason")  # raises on invoke
    aggregated = aggregate_motion_aware(results, MEDIA, specialist, broken_reasoner)
    assert aggregated.degraded
    assert aggregated.final_text == "jumps high"
    assert [s.stage for s in aggregated.stages] == ["specialist"]


def test_motion_aware_stage1_failure_raises():
    results = [scored("m1", "jumps", 0.4)]
    broken_specialist = make_mock("spec")
    reasoner = make_mock("reason", refine=["x"])
    with pytest.raises(SpecialistFailure):
        aggregate_motion_aware(results, MEDIA, broken_specialist, reasoner)
    empty_specialist = make_mock("spec", preliminary=[""])
    with pytest.raises(SpecialistFailure):
        aggregate_motion_aware(results, MEDIA, empty_specialist, reasoner)


def test_motion_aware_empty_refinement_counts_as_degraded():
    results = [scored("m1", "jumps", 0.4)]
    specialist = make_mock("spec", preliminary=["jumps"])
    quiet_reasoner = make_mock("reason", refine=[""])
    aggregated = aggregate_motion_aware(results, MEDIA, specialist, quiet_reasoner)
    assert aggregated.degraded
    assert aggregated.final_text == "jumps"


def test_motion_aware_requires_results():
    with pytest.raises(EmptyInput):
        aggregate_motion_aware([], MEDIA, make_mock("s"), make_mock("r"))


def test_result_invariants_enforced():
    with pytest.raises(ValueError):
        AggregatedResult(final_text="", method=AggregationMethod.CONFIDENCE,
                         winning_cluster=(), support_mass=0.0)
    with pytest.raises(ValueError):
        AggregatedResult(final_text="x", method=AggregationMethod.MOTION_AWARE,
                         winning_cluster=(), support_mass=0.0)
    with pytest.raises(ValueError):
        AggregatedResult(final_text="x", method=AggregationMethod.CONFIDENCE,
                         winning_cluster=(), support_mass=-0.1)
