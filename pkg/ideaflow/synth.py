"""
Synthetic ground-truth ideas, planted flows and noisy word graphs.

Noise only deletes correlations: a planted cell survives with probability
1 - L and keeps its planted lead-lag time.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Tuple, Union

import numpy as np

from .config import SynthConfig
from .exceptions import ConfigurationError, FormatError
from .models import (
    AugmentedBipartiteGraph,
    EdgeRelation,
    FlowReport,
    FlowSegment,
    IdeaCluster,
    IdeaFlow,
    idea_key
)

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class _Infeasible(Exception):
    pass


@dataclass(frozen=True, eq=False)
class GroundTruth:
    """Planted word partitions plus planted segments for every idea pair"""
    report: FlowReport
    labels_a: np.ndarray
    labels_b: np.ndarray
    words_a: Tuple[str, ...]
    words_b: Tuple[str, ...]

    @property
    def T(self) -> int:
        return self.report.T

    @property
    def tau_max(self) -> int:
        return self.report.tau_max

    @property
    def k_a(self) -> int:
        return len(self.report.ideas_a)

    @property
    def k_b(self) -> int:
        return len(self.report.ideas_b)

    def planted(self, idea_a: int, idea_b: int) -> Tuple[np.ndarray, np.ndarray]:
        """Per-time-point planted (c, dt) of one idea pair"""
        return flow_arrays(self.report.flow(idea_a, idea_b), self.T)

    def to_dict(self) -> Dict[str, Any]:
        result = self.report.to_dict()
        result['planted_partition'] = {
            'A': {'words': list(self.words_a), 'labels': self.labels_a.tolist()},
            'B': {'words': list(self.words_b), 'labels': self.labels_b.tolist()}
        }
        return result

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'GroundTruth':
        data = dict(data)
        planted = data.pop('planted_partition')
        return cls(
            report=FlowReport.from_dict(data),
            labels_a=np.array(planted['A']['labels'], dtype=np.int64),
            labels_b=np.array(planted['B']['labels'], dtype=np.int64),
            words_a=tuple(planted['A']['words']),
            words_b=tuple(planted['B']['words'])
        )


def flow_arrays(flow: Union[IdeaFlow, None], T: int) -> Tuple[np.ndarray, np.ndarray]:
    """Expand a flow's segments into per-time-point (c_bar, dt_bar) arrays"""
    c = np.zeros(T, dtype=np.int8)
    dt = np.zeros(T, dtype=np.float64)
    if flow is None:
        return c, dt
    for s in flow.segments:
        if s.c_bar == 1:
            c[s.k_start:s.k_end + 1] = 1
            dt[s.k_start:s.k_end + 1] = s.dt_bar
    return c, dt


def _draw_count(rng: np.random.Generator, bounds: Tuple[int, int], size=None):
    return rng.integers(bounds[0], bounds[1] + 1, size=size)


def _draw_words(rng: np.random.Generator, group: str, k: int, cfg: SynthConfig) -> Tuple[np.ndarray, Tuple[str, ...]]:
    sizes = _draw_count(rng, cfg.words_per_idea, size=k)
    labels = rng.permutation(np.repeat(np.arange(k), sizes))
    seen = np.zeros(k, dtype=np.int64)
    tokens = []
    for label in labels:
        tokens.append(f"{group}{label}w{seen[label]}")
        seen[label] += 1
    return labels.astype(np.int64), tuple(tokens)


def _draw_flow_periods(rng: np.random.Generator, k_a: int, k_b: int, cfg: SynthConfig) -> Dict[Tuple[int, int], int]:
    lo, hi = cfg.periods_per_flow
    covering = max(k_a, k_b)
    periods = {(m % k_a, m % k_b): lo for m in range(covering)}

    # one rank-1 term per planted period; keep the total within k_a + k_b
    budget = k_a + k_b - sum(periods.values())
    for _ in range(int(rng.integers(0, max(budget, 0) + 1))):
        pair = (int(rng.integers(k_a)), int(rng.integers(k_b)))
        if periods.get(pair, 0) < hi:
            periods[pair] = periods.get(pair, 0) + 1
    return periods


def _place_periods(rng: np.random.Generator, n: int, cfg: SynthConfig) -> List[FlowSegment]:
    T = cfg.T
    lengths = _draw_count(rng, cfg.period_length, size=n)
    free = T - int(lengths.sum())
    lo = max(cfg.leadlag[0], -cfg.tau_max)
    hi = min(cfg.leadlag[1], cfg.tau_max)
    if free < 0 or n > hi - lo + 1:
        raise _Infeasible()

    cuts = np.sort(rng.integers(0, free + 1, size=n))
    offsets = rng.choice(np.arange(lo, hi + 1), size=n, replace=False)

    segments = []
    cursor = 0
    consumed = 0
    for m in range(n):
        start = int(cuts[m]) + consumed
        end = start + int(lengths[m]) - 1
        if start > cursor:
            segments.append(FlowSegment(cursor, start - 1, 0, None))
        segments.append(FlowSegment(start, end, 1, float(offsets[m])))
        consumed += int(lengths[m])
        cursor = end + 1
    if cursor < T:
        segments.append(FlowSegment(cursor, T - 1, 0, None))
    return segments


def _ideas(group: str, labels: np.ndarray, tokens: Tuple[str, ...], k: int) -> Tuple[IdeaCluster, ...]:
    ideas = []
    for label in range(k):
        members = tuple(int(i) for i in np.flatnonzero(labels == label))
        ideas.append(IdeaCluster(group, label, members, tuple(tokens[i] for i in members[:10])))
    return tuple(ideas)


def _planted_hotness(ideas_a, ideas_b, flows: Dict[Tuple[int, int], IdeaFlow], T: int) -> Dict[str, List[int]]:
    active_a = {a.idea_id: np.zeros(T, dtype=bool) for a in ideas_a}
    active_b = {b.idea_id: np.zeros(T, dtype=bool) for b in ideas_b}
    for (a, b), flow in flows.items():
        c, _ = flow_arrays(flow, T)
        active_a[a] |= c.astype(bool)
        active_b[b] |= c.astype(bool)
    hotness = {}
    for idea in ideas_a:
        hotness[idea_key('A', idea.idea_id)] = (active_a[idea.idea_id] * len(idea.word_indices)).astype(int).tolist()
    for idea in ideas_b:
        hotness[idea_key('B', idea.idea_id)] = (active_b[idea.idea_id] * len(idea.word_indices)).astype(int).tolist()
    return hotness


def _draw_truth(rng: np.random.Generator, cfg: SynthConfig) -> GroundTruth:
    k_a = int(_draw_count(rng, cfg.ideas_per_group))
    k_b = int(_draw_count(rng, cfg.ideas_per_group))
    labels_a, words_a = _draw_words(rng, 'A', k_a, cfg)
    labels_b, words_b = _draw_words(rng, 'B', k_b, cfg)

    periods = _draw_flow_periods(rng, k_a, k_b, cfg)
    flows = {}
    for a in range(k_a):
        for b in range(k_b):
            n = periods.get((a, b), 0)
            segments = _place_periods(rng, n, cfg) if n else [FlowSegment(0, cfg.T - 1, 0, None)]
            flows[(a, b)] = IdeaFlow(a, b, tuple(segments))

    ideas_a = _ideas('A', labels_a, words_a, k_a)
    ideas_b = _ideas('B', labels_b, words_b, k_b)
    report = FlowReport(
        T=cfg.T,
        tau_max=cfg.tau_max,
        ideas_a=ideas_a,
        ideas_b=ideas_b,
        flows=tuple(flows[key] for key in sorted(flows)),
        hotness=_planted_hotness(ideas_a, ideas_b, flows, cfg.T),
        metadata={'synth_config': cfg.to_dict()}
    )
    return GroundTruth(report, labels_a, labels_b, words_a, words_b)


def generate_ground_truth(cfg: SynthConfig = SynthConfig()) -> GroundTruth:
    """
    Draw planted ideas and lead-lag periods.

    Every idea takes part in at least one flow. Periods of one idea pair
    do not overlap and carry distinct integer lead-lag times. A draw whose
    periods cannot be packed into T points is repeated with a fresh
    sub-seed.

    Raises:
        ConfigurationError: if no feasible draw is found within max_retries
    """
    cfg.validate()
    for attempt in range(cfg.max_retries):
        rng = np.random.default_rng([cfg.seed, 0, attempt])
        try:
            truth = _draw_truth(rng, cfg)
        except _Infeasible:
            logger.debug("seed %d attempt %d: periods do not fit, redrawing", cfg.seed, attempt)
            continue
        logger.debug("ground truth: %d ideas in A, %d in B", truth.k_a, truth.k_b)
        return truth
    raise ConfigurationError(
        f"Cannot place planted periods within T={cfg.T} after {cfg.max_retries} attempts",
        suggestion="Shorten period_length or lower periods_per_flow"
    )


def generate_graph(gt: GroundTruth, cfg: SynthConfig = SynthConfig()) -> AugmentedBipartiteGraph:
    """
    Word graph of a ground truth at noise level L.

    Each planted cell of a word pair is kept with probability 1 - L and
    carries the planted lead-lag time; pairs with no surviving cell are
    omitted.
    """
    rng = np.random.default_rng([cfg.seed, 1])
    planted = {
        (f.idea_a, f.idea_b): flow_arrays(f, gt.T) for f in gt.report.flows
    }

    edges = []
    for i, a in enumerate(gt.labels_a):
        for j, b in enumerate(gt.labels_b):
            c, dt = planted[(int(a), int(b))]
            if not c.any():
                continue
            if cfg.noise_level > 0.0:
                c = c & (rng.random(gt.T) >= cfg.noise_level)
            if c.any():
                edges.append(EdgeRelation(i, j, c, np.where(c == 1, dt, 0).astype(np.int64)))

    logger.debug("synthetic graph: %d edges at L=%.2f", len(edges), cfg.noise_level)
    return AugmentedBipartiteGraph(
        n_a=gt.labels_a.size,
        n_b=gt.labels_b.size,
        T=gt.T,
        tau_max=gt.tau_max,
        edges=tuple(edges),
        words_a=gt.words_a,
        words_b=gt.words_b
    )


def write_truth(path: PathLike, gt: GroundTruth) -> None:
    Path(path).write_text(json.dumps(gt.to_dict(), separators=(',', ':')) + '\n', encoding='utf-8')


def read_truth(path: PathLike) -> GroundTruth:
    try:
        return GroundTruth.from_dict(json.loads(Path(path).read_text(encoding='utf-8')))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        raise FormatError(f"Cannot read ground truth: {e}", source=str(path))
