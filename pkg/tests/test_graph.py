"""
Word graph construction and its JSON interchange format
"""

import json

import numpy as np
import pytest

from ideaflow.config import BccConfig, DtwConfig
from ideaflow.exceptions import DimensionError, FormatError, InvalidInputError, UniquenessError
from ideaflow.graph import build_edge, build_graph, read_graph, write_graph
from ideaflow.models import AugmentedBipartiteGraph, EdgeRelation, GroupSeries, TimeSeries, WordSeries


def _lagged_pair(seed, T=100, lag=2, noise=0.05):
    rng = np.random.default_rng(seed)
    x = np.cumsum(rng.normal(size=T + lag))
    y = x[:T] + rng.normal(scale=noise, size=T)
    return x[lag:], y


def _walk_group(group, tokens, seed, T=60):
    rng = np.random.default_rng(seed)
    return GroupSeries(group, tuple(
        WordSeries(token, group, TimeSeries(np.cumsum(rng.normal(size=T)) + 50.0))
        for token in tokens
    ))


def test_build_edge_recovers_lead():
    """y trailing x by two points gives dt = +2 where correlated"""
    x, y = _lagged_pair(0)
    edge = build_edge(TimeSeries(x), TimeSeries(y), DtwConfig(tau_max=6), BccConfig())

    assert edge is not None
    interior = edge.c[10:90] == 1
    assert interior.sum() > 40
    assert np.median(edge.dt[10:90][interior]) == 2
    assert np.all(edge.dt[edge.c == 0] == 0)
    assert np.all(np.abs(edge.dt) <= 6)


def test_build_edge_skips_constant_series():
    """A flat series has nothing to correlate"""
    x = np.random.default_rng(1).normal(size=30)

    assert build_edge(TimeSeries(x), TimeSeries(np.full(30, 4.0))) is None


def test_build_edge_length_mismatch():
    """Both words must share one clock"""
    with pytest.raises(DimensionError):
        build_edge(TimeSeries(np.arange(10.0)), TimeSeries(np.arange(11.0)))


def test_build_graph_canonical_order_and_shape():
    """Edges come back in (i, j) order with the group tokens attached"""
    a = _walk_group('A', ['tax', 'vote', 'debt'], seed=2)
    b = _walk_group('B', ['tax', 'bill'], seed=3)
    graph = build_graph(a, b, DtwConfig(tau_max=3))

    assert graph.dims == (3, 2, 60)
    assert graph.tau_max == 3
    assert graph.words_a == ('tax', 'vote', 'debt')
    keys = [(e.i, e.j) for e in graph.edges]
    assert keys == sorted(keys)
    for edge in graph.edges:
        assert edge.c.any()
        assert np.all(edge.dt[edge.c == 0] == 0)


def test_build_graph_worker_pool_matches_serial():
    """The process pool returns the same graph as the serial loop"""
    a = _walk_group('A', ['a0', 'a1', 'a2'], seed=4, T=40)
    b = _walk_group('B', ['b0', 'b1', 'b2'], seed=5, T=40)
    serial = build_graph(a, b, DtwConfig(tau_max=2))
    pooled = build_graph(a, b, DtwConfig(tau_max=2), workers=2)

    assert serial.to_dict() == pooled.to_dict()


def test_build_graph_excludes_self_pairs():
    """A dataset paired with itself skips the diagonal"""
    a = _walk_group('A', ['s0', 's1', 's2'], seed=6, T=40)
    b = GroupSeries('B', tuple(WordSeries(w.word, 'B', w.series) for w in a.words))
    graph = build_graph(a, b, DtwConfig(tau_max=2), exclude_self=True)

    assert all(e.i != e.j for e in graph.edges)


def test_build_graph_rejects_duplicates():
    """Duplicate tokens within a group are caught before any pairing"""
    a = _walk_group('A', ['tax', 'tax'], seed=7)

    with pytest.raises(UniquenessError):
        build_graph(a, _walk_group('B', ['tax'], seed=8))


def test_graph_json_round_trip(tmp_path):
    """Metadata is written alongside and ignored on read"""
    graph = AugmentedBipartiteGraph(
        n_a=2, n_b=1, T=4, tau_max=1,
        edges=(EdgeRelation(1, 0, [0, 1, 1, 0], [0, -1, 1, 0]),),
        words_a=('tax', 'vote'), words_b=('debt',)
    )
    path = tmp_path / 'graph.json'
    write_graph(path, graph, {'config': {'tau_max': 1}})

    data = json.loads(path.read_text())
    loaded = read_graph(path)

    assert data['config'] == {'tau_max': 1}
    assert data['dims'] == [2, 1, 4]
    assert loaded.to_dict() == graph.to_dict()


def test_read_graph_rejects_garbage(tmp_path):
    """Unreadable graphs are format errors"""
    path = tmp_path / 'graph.json'
    path.write_text('{"dims": [1, 1]}')

    with pytest.raises(FormatError):
        read_graph(path)
    with pytest.raises(FormatError):
        read_graph(tmp_path / 'missing.json')


def test_graph_validates_edges():
    """Edges outside the dimensions or of the wrong length are rejected"""
    with pytest.raises(InvalidInputError):
        AugmentedBipartiteGraph(1, 1, 3, 1, edges=(EdgeRelation(1, 0, [1, 0, 0], [0, 0, 0]),))
    with pytest.raises(InvalidInputError):
        AugmentedBipartiteGraph(1, 1, 3, 1, edges=(EdgeRelation(0, 0, [1, 0], [0, 0]),))


def test_graph_validates_values():
    """c holds only 0 and 1; correlated lead-lag times stay within tau_max"""
    with pytest.raises(InvalidInputError):
        EdgeRelation(0, 0, [1, 2, 0], [0, 0, 0])
    with pytest.raises(InvalidInputError):
        AugmentedBipartiteGraph(1, 1, 3, 2, edges=(EdgeRelation(0, 0, [1, 1, 0], [0, 3, 0]),))
    with pytest.raises(InvalidInputError):
        AugmentedBipartiteGraph(1, 1, 3, 2, edges=(EdgeRelation(0, 0, [1, 0, 0], [-3, 0, 0]),))


def test_read_graph_rejects_edited_values(tmp_path):
    """A graph file with an out-of-band lead-lag time or a non-binary c is a format error"""
    graph = AugmentedBipartiteGraph(1, 1, 4, 2, edges=(EdgeRelation(0, 0, [1, 1, 0, 0], [2, -2, 0, 0]),))
    path = tmp_path / 'graph.json'
    write_graph(path, graph)
    data = json.loads(path.read_text())

    data['edges'][0]['dt'] = [7, -2, 0, 0]
    path.write_text(json.dumps(data))
    with pytest.raises(FormatError):
        read_graph(path)

    data['edges'][0]['dt'] = [2, -2, 0, 0]
    data['edges'][0]['c'] = [1, 3, 0, 0]
    path.write_text(json.dumps(data))
    with pytest.raises(FormatError):
        read_graph(path)


def test_dense_views_zero_uncorrelated_offsets():
    """dense_dt reports 0 wherever c is 0"""
    graph = AugmentedBipartiteGraph(1, 1, 3, 2, edges=(EdgeRelation(0, 0, [1, 0, 1], [2, 5, -1]),))

    assert graph.dense_c()[0, 0].tolist() == [1, 0, 1]
    assert graph.dense_dt()[0, 0].tolist() == [2, 0, -1]
