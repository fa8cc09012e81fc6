"""
Flow metrics against planted ground truth, and the series clustering mode
"""

import logging
from typing import Dict, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import linear_sum_assignment
from sklearn.metrics.cluster import contingency_matrix

from .clustering import feature_rows, kmeans, nmi
from .config import BccConfig, DtwConfig, KMeansConfig, ParafacConfig
from .dtw import dtw_align, global_shift_align
from .exceptions import ConfigurationError, DimensionError, EmptyTensorError
from .graph import build_graph
from .models import (
    AugmentedBipartiteGraph,
    FlowReport,
    GroupSeries,
    MetricReport,
    Partition,
    TimeSeries,
    WordSeries
)
from .synth import GroundTruth, flow_arrays
from .tensor import build_tensor, greedy_parafac

logger = logging.getLogger(__name__)

METHODS = ('ours', 'b3')

Matching = Dict[int, int]


class IdeaMatching(NamedTuple):
    """Predicted idea id -> planted idea id, per group"""
    a: Matching
    b: Matching


def match_ideas(predicted: Sequence[int], truth: Sequence[int]) -> Matching:
    """
    Maximum word-overlap one-to-one matching of predicted to planted ideas.

    Words labelled -1 on either side are ignored; pairs without overlap
    stay unmatched.

    Raises:
        DimensionError: if the label vectors cover different words
    """
    predicted = np.asarray(predicted)
    truth = np.asarray(truth)
    if predicted.size != truth.size:
        raise DimensionError(f"Label vectors have {predicted.size} and {truth.size} words")
    keep = (predicted >= 0) & (truth >= 0)
    if not keep.any():
        return {}

    pred_ids = np.unique(predicted[keep])
    true_ids = np.unique(truth[keep])
    overlap = contingency_matrix(predicted[keep], truth[keep])
    rows, cols = linear_sum_assignment(overlap, maximize=True)
    return {
        int(pred_ids[r]): int(true_ids[c])
        for r, c in zip(rows, cols)
        if overlap[r, c] > 0
    }


def _truth_report(truth: Union[GroundTruth, FlowReport]) -> FlowReport:
    return truth.report if isinstance(truth, GroundTruth) else truth


def _round_half_away(values: np.ndarray) -> np.ndarray:
    return np.sign(values) * np.floor(np.abs(values) + 0.5)


def _f1(correct: int, n_pred: int, n_true: int) -> float:
    if n_pred == 0 and n_true == 0:
        return 1.0
    if correct == 0:
        return 0.0
    precision = correct / n_pred
    recall = correct / n_true
    return 2 * precision * recall / (precision + recall)


class _PointTally(NamedTuple):
    n_pred: int
    n_true: int
    correct: int
    correct_lead: int
    correct_time: int
    squared_errors: Tuple[float, ...]


def _tally(pred: FlowReport, truth: FlowReport, matching: IdeaMatching) -> _PointTally:
    T = truth.T
    n_true = sum(int(flow_arrays(f, T)[0].sum()) for f in truth.flows)
    n_pred = correct = correct_lead = correct_time = 0
    errors = []
    for flow in pred.flows:
        c_pred, dt_pred = flow_arrays(flow, T)
        n_pred += int(c_pred.sum())
        if flow.idea_a not in matching.a or flow.idea_b not in matching.b:
            continue
        c_true, dt_true = flow_arrays(truth.flow(matching.a[flow.idea_a], matching.b[flow.idea_b]), T)

        both = (c_pred == 1) & (c_true == 1)
        lead = both & (np.sign(dt_pred) == np.sign(dt_true))
        exact = lead & (_round_half_away(dt_pred) == dt_true)
        correct += int(both.sum())
        correct_lead += int(lead.sum())
        correct_time += int(exact.sum())
        errors.extend(((dt_pred[both] - dt_true[both]) ** 2).tolist())
    return _PointTally(n_pred, n_true, correct, correct_lead, correct_time, tuple(errors))


def flow_f1_suite(
    pred: FlowReport,
    truth: Union[GroundTruth, FlowReport],
    matching: IdeaMatching
) -> Tuple[float, float, float]:
    """
    Flow_F1, FlowLead_F1 and FlowLeadTime_F1 over (idea pair, time point) units.

    A predicted correlated point is correct when the matched planted pair
    is correlated there; FlowLead additionally needs the lead-lag sign to
    agree and FlowLeadTime additionally needs the rounded time to equal
    the planted one. Both F1s share the positive sets, so the three
    values are nested.
    """
    tally = _tally(pred, _truth_report(truth), matching)
    return (
        _f1(tally.correct, tally.n_pred, tally.n_true),
        _f1(tally.correct_lead, tally.n_pred, tally.n_true),
        _f1(tally.correct_time, tally.n_pred, tally.n_true)
    )


def leadlag_mse(
    pred: FlowReport,
    truth: Union[GroundTruth, FlowReport],
    matching: IdeaMatching
) -> Optional[float]:
    """Mean squared lead-lag error over points correlated in both; None if there are none"""
    errors = _tally(pred, _truth_report(truth), matching).squared_errors
    return float(np.mean(errors)) if errors else None


def evaluate_run(report: FlowReport, truth: GroundTruth, runtime_seconds: float = 0.0) -> MetricReport:
    """Score one predicted report against a planted ground truth"""
    labels_a = report.labels('A', truth.labels_a.size)
    labels_b = report.labels('B', truth.labels_b.size)
    matching = IdeaMatching(
        a=match_ideas(labels_a, truth.labels_a),
        b=match_ideas(labels_b, truth.labels_b)
    )
    f1, f1_lead, f1_time = flow_f1_suite(report, truth, matching)
    return MetricReport(
        flow_f1=f1,
        flowlead_f1=f1_lead,
        flowleadtime_f1=f1_time,
        mse=leadlag_mse(report, truth, matching),
        nmi_a=nmi(labels_a, truth.labels_a),
        nmi_b=nmi(labels_b, truth.labels_b),
        runtime_seconds=runtime_seconds
    )


def as_group(series: Union[np.ndarray, Sequence], group: str) -> GroupSeries:
    """Wrap a series collection as a group with tokens s0, s1, ..."""
    return GroupSeries(group, tuple(
        WordSeries(f"s{n}", group, s if isinstance(s, TimeSeries) else TimeSeries(s))
        for n, s in enumerate(series)
    ))


def series_graph(
    series: Union[np.ndarray, Sequence],
    method: str = 'ours',
    dtw_cfg: DtwConfig = DtwConfig(),
    bcc_cfg: BccConfig = BccConfig(),
    workers: int = 1
) -> AugmentedBipartiteGraph:
    """
    Graph of a series set paired with itself, self pairs excluded.

    'ours' aligns with DTW; 'b3' swaps in a single global shift.
    """
    if method not in METHODS:
        raise ConfigurationError(f"Unknown clustering method '{method}'",
                                 suggestion=f"Use one of {', '.join(METHODS)}")
    aligner = dtw_align if method == 'ours' else global_shift_align
    return build_graph(
        as_group(series, 'A'),
        as_group(series, 'B'),
        dtw_cfg,
        bcc_cfg,
        workers=workers,
        exclude_self=True,
        aligner=aligner
    )


def cluster_series(
    series: Union[np.ndarray, Sequence],
    k: int,
    method: str = 'ours',
    seed: int = 0,
    dtw_cfg: DtwConfig = DtwConfig(),
    bcc_cfg: BccConfig = BccConfig(),
    variant: str = 'x3',
    rank: Optional[int] = None,
    restarts: int = 10,
    parafac: ParafacConfig = ParafacConfig(),
    graph: Optional[AugmentedBipartiteGraph] = None,
    workers: int = 1
) -> Partition:
    """
    Cluster a series set through its word-graph tensor.

    Args:
        series: (N, T) values or a sequence of series
        k: Number of clusters
        method: 'ours' or 'b3'
        seed: Seeds both the factorization and k-means
        rank: PARAFAC rank, 2k when omitted
        graph: A graph already built by series_graph, reused across seeds

    Raises:
        ConfigurationError: if k exceeds the number of series
        EmptyTensorError: if no pair of series is correlated
    """
    n = len(series)
    KMeansConfig(k=k, restarts=restarts).validate(n)
    if graph is None:
        graph = series_graph(series, method, dtw_cfg, bcc_cfg, workers)
    if not graph.edges:
        raise EmptyTensorError("No correlated series pairs")

    t = build_tensor(graph, variant)
    f = greedy_parafac(t, rank or 2 * k, parafac.iters, parafac.tol, seed=seed)
    if f.rank == 0:
        raise EmptyTensorError("Series graph tensor has no mass to factorize")
    return kmeans(feature_rows(f, 'u'), KMeansConfig(k=k, restarts=restarts, seed=seed))
