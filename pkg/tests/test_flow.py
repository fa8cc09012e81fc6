"""
Word partition, time segmentation, flow aggregation and leadership
"""

import numpy as np
import pytest

from ideaflow.config import FlowConfig
from ideaflow.exceptions import EmptyTensorError
from ideaflow.flow import (
    aggregate_flows,
    label_runs,
    partition_words,
    segment_timepoints,
    summarize_leadership,
    track_idea_flows
)
from ideaflow.models import AugmentedBipartiteGraph, EdgeRelation, FlowReport, FlowSegment, IdeaCluster, IdeaFlow
from ideaflow.tensor import build_tensor


def _period_graph(n_a=3, n_b=3, T=40, start=10, end=30, dt=3, tau=6, silent_a=0):
    """Every (i, j) pair correlated on [start, end] with one lead-lag time"""
    c = np.zeros(T, dtype=int)
    c[start:end + 1] = 1
    edges = tuple(
        EdgeRelation(i, j, c, c * dt)
        for i in range(n_a - silent_a)
        for j in range(n_b)
    )
    return AugmentedBipartiteGraph(
        n_a, n_b, T, tau, edges=edges,
        words_a=tuple(f"a{i}" for i in range(n_a)),
        words_b=tuple(f"b{j}" for j in range(n_b))
    )


def _idea(group, idea_id, members):
    return IdeaCluster(group, idea_id, tuple(members))


def test_label_runs():
    """Maximal runs of equal labels, inclusive bounds"""
    assert label_runs([0, 0, 1, 1, 0]) == [(0, 1), (2, 3), (4, 4)]
    assert label_runs([3]) == [(0, 0)]


def test_segment_timepoints_finds_planted_period():
    """A single planted period splits the timeline at its bounds"""
    graph = _period_graph()
    tensor = build_tensor(graph, 'x3')
    runs = segment_timepoints(tensor, _idea('A', 0, range(3)), _idea('B', 0, range(3)), FlowConfig(k_t=4))

    assert runs == [(0, 9), (10, 30), (31, 39)]


def test_segment_timepoints_single_cluster():
    """k_t = 1 keeps the whole timeline together"""
    tensor = build_tensor(_period_graph(), 'x3')
    runs = segment_timepoints(tensor, _idea('A', 0, range(3)), _idea('B', 0, range(3)), FlowConfig(k_t=1))

    assert runs == [(0, 39)]


def test_segment_timepoints_uncorrelated_pair():
    """A pair without correlated cells is one segment"""
    graph = _period_graph(n_a=2, n_b=2, silent_a=1)
    tensor = build_tensor(graph, 'x3')

    assert segment_timepoints(tensor, _idea('A', 1, [1]), _idea('B', 0, [0, 1])) == [(0, 39)]


def test_aggregate_flows_means_and_hotness():
    """Segment means, lead-lag averages and per-idea hotness"""
    edges = (
        EdgeRelation(0, 0, [1, 1, 1, 0, 0, 0], [3, 3, 3, 0, 0, 0]),
        EdgeRelation(1, 0, [1, 1, 1, 1, 0, 0], [3, 3, 3, 3, 0, 0]),
    )
    graph = AugmentedBipartiteGraph(2, 1, 6, 3, edges=edges)
    ideas_a = (_idea('A', 0, [0, 1]),)
    ideas_b = (_idea('B', 0, [0]),)
    report = aggregate_flows(graph, ideas_a, ideas_b, {(0, 0): [(0, 2), (3, 5)]}, threshold=0.5)

    assert report.flow(0, 0).segments == (FlowSegment(0, 2, 1, 3.0), FlowSegment(3, 5, 0, None))
    assert report.hotness['A:0'] == [2, 2, 2, 1, 0, 0]
    assert report.hotness['B:0'] == [1, 1, 1, 1, 0, 0]


def test_aggregate_flows_threshold_tie_is_correlated():
    """A segment mean exactly at the threshold counts as correlated"""
    graph = AugmentedBipartiteGraph(1, 1, 4, 2, edges=(EdgeRelation(0, 0, [1, 1, 0, 0], [2, 2, 0, 0]),))
    report = aggregate_flows(graph, (_idea('A', 0, [0]),), (_idea('B', 0, [0]),), {(0, 0): [(0, 3)]}, 0.5)

    assert report.flow(0, 0).segments == (FlowSegment(0, 3, 1, 2.0),)


def test_aggregate_flows_default_run_covers_timeline():
    """Pairs without runs get one segment over [0, T-1]"""
    graph = AugmentedBipartiteGraph(1, 1, 5, 1)
    report = aggregate_flows(graph, (_idea('A', 0, [0]),), (_idea('B', 0, [0]),), {})

    assert report.flow(0, 0).segments == (FlowSegment(0, 4, 0, None),)
    assert report.hotness == {'A:0': [0] * 5, 'B:0': [0] * 5}


def test_summarize_leadership():
    """Length-weighted mean lead-lag time decides the leader"""
    flows = (
        IdeaFlow(0, 0, (FlowSegment(0, 4, 1, 2.0), FlowSegment(5, 9, 1, -1.0))),
        IdeaFlow(0, 1, (FlowSegment(0, 9, 1, -3.0),)),
        IdeaFlow(1, 0, (FlowSegment(0, 9, 0, None),)),
        IdeaFlow(1, 1, (FlowSegment(0, 9, 1, 0.0),)),
    )
    report = FlowReport(T=10, tau_max=6, ideas_a=(), ideas_b=(), flows=flows)
    summary = summarize_leadership(report)

    assert [(p.idea_a, p.idea_b, p.leader) for p in summary.pairs] == [(0, 0, 'A'), (0, 1, 'B'), (1, 1, 'none')]
    assert summary.pairs[0].mean_dt == pytest.approx(0.5)
    assert summary.counts == {'A': 1, 'B': 1, 'none': 1}
    assert summary.shares['A'] == pytest.approx(1 / 3)


def test_partition_words_needs_edges():
    """A graph without edges has nothing to factorize"""
    with pytest.raises(EmptyTensorError):
        partition_words(AugmentedBipartiteGraph(3, 3, 10, 2), FlowConfig())


def test_partition_words_single_idea():
    """k = 1 puts every word in one idea, top words by degree"""
    graph = _period_graph(n_a=4, n_b=2, silent_a=1)
    words = partition_words(graph, FlowConfig(k_a=1, k_b=1))

    assert words.ideas_a[0].word_indices == (0, 1, 2, 3)
    assert words.ideas_a[0].top_words == ('a0', 'a1', 'a2', 'a3')
    assert words.ideas_b[0].word_indices == (0, 1)


def test_track_idea_flows_end_to_end():
    """One planted period comes back as one correlated segment"""
    report = track_idea_flows(_period_graph(), FlowConfig(k_a=1, k_b=1), {'source': 'unit'})
    flow = report.flow(0, 0)

    assert [(s.k_start, s.k_end, s.c_bar) for s in flow.segments] == [(0, 9, 0), (10, 30, 1), (31, 39, 0)]
    assert flow.segments[1].dt_bar == pytest.approx(3.0)
    assert report.metadata['source'] == 'unit'
    assert report.metadata['word_rank'] == 1
    assert report.metadata['leadership']['counts'] == {'A': 1, 'B': 0, 'none': 0}


def test_flow_report_round_trip():
    """Reports survive to_dict/from_dict with their metadata"""
    report = track_idea_flows(_period_graph(), FlowConfig(k_a=1, k_b=1), {'source': 'unit'})
    again = FlowReport.from_dict(report.to_dict())

    assert again.to_dict() == report.to_dict()
    assert again.labels('A', 3).tolist() == [0, 0, 0]


def test_aggregate_flows_threshold_monotonicity():
    """Raising the threshold never turns an uncorrelated segment into a correlated one"""
    rng = np.random.default_rng(11)
    T = 30
    edges = []
    for i in range(3):
        for j in range(2):
            c = (rng.random(T) < 0.4).astype(int)
            edges.append(EdgeRelation(i, j, c, c * int(rng.integers(-2, 3))))
    graph = AugmentedBipartiteGraph(3, 2, T, 2, edges=tuple(edges))
    ideas_a = (_idea('A', 0, [0, 1]), _idea('A', 1, [2]))
    ideas_b = (_idea('B', 0, [0, 1]),)
    runs = {(0, 0): [(0, 4), (5, 14), (15, 29)], (1, 0): [(0, 9), (10, 29)]}

    reports = [aggregate_flows(graph, ideas_a, ideas_b, runs, threshold) for threshold in (0.1, 0.3, 0.5, 0.7, 0.9)]
    for low, high in zip(reports, reports[1:]):
        for flow_low, flow_high in zip(low.flows, high.flows):
            for s_low, s_high in zip(flow_low.segments, flow_high.segments):
                assert s_high.c_bar <= s_low.c_bar
                if s_high.c_bar == 1:
                    assert s_high.dt_bar == s_low.dt_bar
