"""
Idea flows: word partition, time segmentation and flow aggregation
"""

import logging
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .clustering import feature_rows, kmeans
from .config import FlowConfig
from .exceptions import EmptyTensorError
from .models import (
    AugmentedBipartiteGraph,
    FlowReport,
    FlowSegment,
    IdeaCluster,
    IdeaFlow,
    LeadershipSummary,
    PairLeadership,
    Partition,
    idea_key
)
from .tensor import FactorSet, SparseTensor4, build_tensor, greedy_parafac, residual_norm, subtensor

logger = logging.getLogger(__name__)

TOP_WORDS = 10

Run = Tuple[int, int]


class WordPartition(NamedTuple):
    ideas_a: Tuple[IdeaCluster, ...]
    ideas_b: Tuple[IdeaCluster, ...]
    factors: FactorSet


def _ideas(group: str, partition: Partition, degree: np.ndarray, tokens: Sequence[str]) -> Tuple[IdeaCluster, ...]:
    ideas = []
    for label in range(partition.k):
        members = partition.members(label)
        if not members:
            continue
        ranked = sorted(members, key=lambda i: (-int(degree[i]), tokens[i]))
        ideas.append(IdeaCluster(
            group=group,
            idea_id=label,
            word_indices=tuple(members),
            top_words=tuple(tokens[i] for i in ranked[:TOP_WORDS])
        ))
    return tuple(ideas)


def partition_words(
    graph: AugmentedBipartiteGraph,
    cfg: FlowConfig = FlowConfig(),
    tensor: Optional[SparseTensor4] = None
) -> WordPartition:
    """
    Cluster the words of each group into ideas.

    The graph tensor is factorized at rank q, and the rows of the u and v
    factor matrices are clustered with k-means into k_a and k_b ideas.
    Top words of an idea are ranked by their number of correlated cells.

    Args:
        graph: Augmented bipartite word graph
        cfg: Flow settings (variant, q, k_a, k_b, seeds)
        tensor: Encoded graph, built from cfg.variant when omitted

    Returns:
        WordPartition with the ideas of both groups and the factors

    Raises:
        EmptyTensorError: if the graph has no correlated pair
        ConfigurationError: if k_a or k_b exceeds the group's word count
    """
    if not graph.edges:
        raise EmptyTensorError("No correlated pairs in the word graph",
                               suggestion="Relax --theta-global or --theta-local")
    t = tensor if tensor is not None else build_tensor(graph, cfg.variant)
    f = greedy_parafac(t, cfg.effective_rank, cfg.parafac.iters, cfg.parafac.tol, seed=cfg.seed)
    if f.rank == 0:
        raise EmptyTensorError("Word graph tensor has no mass to factorize")
    logger.info("PARAFAC %s: %d components, residual %.6g of %.6g",
                cfg.variant, f.rank, residual_norm(t, f), t.norm())

    p_a = kmeans(feature_rows(f, 'u'), cfg.kmeans(cfg.k_a))
    p_b = kmeans(feature_rows(f, 'v'), cfg.kmeans(cfg.k_b, seed_offset=1))

    c = graph.dense_c()
    words_a = [graph.token_a(i) for i in range(graph.n_a)]
    words_b = [graph.token_b(j) for j in range(graph.n_b)]
    return WordPartition(
        ideas_a=_ideas('A', p_a, c.sum(axis=(1, 2)), words_a),
        ideas_b=_ideas('B', p_b, c.sum(axis=(0, 2)), words_b),
        factors=f
    )


def label_runs(labels: Sequence[int]) -> List[Run]:
    """Maximal runs of consecutive equal labels as inclusive (start, end) pairs"""
    labels = np.asarray(labels)
    cuts = np.flatnonzero(np.diff(labels)) + 1
    starts = np.concatenate([[0], cuts])
    ends = np.concatenate([cuts - 1, [labels.size - 1]])
    return [(int(s), int(e)) for s, e in zip(starts, ends)]


def segment_timepoints(
    tensor: SparseTensor4,
    idea_a: IdeaCluster,
    idea_b: IdeaCluster,
    cfg: FlowConfig = FlowConfig()
) -> List[Run]:
    """
    Split the timeline of one idea pair into segments.

    The sub-tensor of the pair is factorized at rank q_seg and the rows of
    its time factor are clustered into at most k_t groups (fewer when fewer
    distinct rows exist); each maximal run of one label is a segment.

    Returns:
        Inclusive runs covering [0, T-1]; a single run when the pair has
        no correlated cell
    """
    T = tensor.shape[2]
    sub = subtensor(tensor, idea_a.word_indices, idea_b.word_indices)
    if sub.nnz == 0 or sub.norm() == 0.0:
        return [(0, T - 1)]

    f = greedy_parafac(sub, cfg.rank_seg, cfg.parafac.iters, cfg.parafac.tol, seed=cfg.seed)
    if f.rank == 0:
        return [(0, T - 1)]

    rows = feature_rows(f, 'w')
    k = min(cfg.k_t, int(np.unique(rows, axis=0).shape[0]))
    partition = kmeans(rows, cfg.kmeans(k))
    runs = label_runs(partition.labels)
    logger.debug("ideas A:%d B:%d -> %d segments", idea_a.idea_id, idea_b.idea_id, len(runs))
    return runs


def _hotness(c: np.ndarray, ideas: Sequence[IdeaCluster], axis: int) -> Dict[str, List[int]]:
    hotness = {}
    for idea in ideas:
        block = np.take(c, list(idea.word_indices), axis=axis)
        active = block.any(axis=1 - axis)
        hotness[idea_key(idea.group, idea.idea_id)] = active.sum(axis=0).astype(int).tolist()
    return hotness


def aggregate_flows(
    graph: AugmentedBipartiteGraph,
    ideas_a: Sequence[IdeaCluster],
    ideas_b: Sequence[IdeaCluster],
    runs: Dict[Tuple[int, int], List[Run]],
    threshold: float = 0.5,
    metadata: Optional[Dict] = None
) -> FlowReport:
    """
    Aggregate word-pair cells into per-segment flow values.

    For each segment the mean of c over every (word pair, time point) cell
    is compared against the threshold (ties count as correlated); the
    lead-lag time of a correlated segment is the mean dt over its
    correlated cells. Hotness counts, per idea and time point, the words
    with a correlated cell on any incident edge.
    """
    c = graph.dense_c()
    dt = graph.dense_dt()

    flows = []
    for a in ideas_a:
        for b in ideas_b:
            rows = np.ix_(list(a.word_indices), list(b.word_indices))
            c_per_t = c[rows].sum(axis=(0, 1)).astype(np.int64)
            dt_per_t = dt[rows].sum(axis=(0, 1))
            cells = len(a.word_indices) * len(b.word_indices)

            segments = []
            for start, end in runs.get((a.idea_id, b.idea_id), [(0, graph.T - 1)]):
                hits = int(c_per_t[start:end + 1].sum())
                mean = hits / (cells * (end - start + 1))
                correlated = hits > 0 and mean >= threshold
                dt_bar = float(dt_per_t[start:end + 1].sum() / hits) if correlated else None
                segments.append(FlowSegment(start, end, int(correlated), dt_bar))
            flows.append(IdeaFlow(a.idea_id, b.idea_id, tuple(segments)))

    hotness = _hotness(c, ideas_a, axis=0)
    hotness.update(_hotness(c, ideas_b, axis=1))
    return FlowReport(
        T=graph.T,
        tau_max=graph.tau_max,
        ideas_a=tuple(ideas_a),
        ideas_b=tuple(ideas_b),
        flows=tuple(flows),
        hotness=hotness,
        metadata=dict(metadata or {})
    )


def summarize_leadership(report: FlowReport) -> LeadershipSummary:
    """
    Length-weighted mean lead-lag time per correlated idea pair.

    A positive mean says the group A idea leads, a negative one that the
    group B idea leads.
    """
    pairs = []
    for flow in report.flows:
        correlated = [s for s in flow.segments if s.c_bar == 1]
        if not correlated:
            continue
        points = sum(s.length for s in correlated)
        mean_dt = sum(s.dt_bar * s.length for s in correlated) / points
        pairs.append(PairLeadership(flow.idea_a, flow.idea_b, float(mean_dt), points))
    return LeadershipSummary(tuple(pairs))


def track_idea_flows(
    graph: AugmentedBipartiteGraph,
    cfg: FlowConfig = FlowConfig(),
    metadata: Optional[Dict] = None
) -> FlowReport:
    """
    Full flow extraction over a built word graph.

    Args:
        graph: Augmented bipartite word graph
        cfg: Flow settings
        metadata: Extra fields carried into the report (run configuration)

    Returns:
        FlowReport with a `leadership` summary in its metadata
    """
    cfg.validate()
    t = build_tensor(graph, cfg.variant)
    logger.info("Tensor %s: shape %s, %d entries", cfg.variant, t.shape, t.nnz)

    words = partition_words(graph, cfg, tensor=t)
    runs = {
        (a.idea_id, b.idea_id): segment_timepoints(t, a, b, cfg)
        for a in words.ideas_a
        for b in words.ideas_b
    }

    report = aggregate_flows(graph, words.ideas_a, words.ideas_b, runs, cfg.threshold, metadata)
    report.metadata['word_rank'] = words.factors.rank
    report.metadata['leadership'] = summarize_leadership(report).to_dict()
    logger.info("%d ideas in A, %d in B, %d correlated idea pairs",
                len(words.ideas_a), len(words.ideas_b),
                len(report.metadata['leadership']['pairs']))
    return report
