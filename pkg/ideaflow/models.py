"""
Data models for ideaflow
"""

from dataclasses import dataclass, field
from typing import Optional, List, Dict, Any, Tuple, Sequence

import numpy as np

from .exceptions import InvalidInputError

GROUPS: Tuple[str, str] = ('A', 'B')


def _frozen_array(values: Any, dtype: Any) -> np.ndarray:
    array = np.array(values, dtype=dtype)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """A real-valued trajectory over T time points"""
    values: np.ndarray

    def __post_init__(self) -> None:
        values = _frozen_array(self.values, np.float64)
        if values.ndim != 1:
            raise InvalidInputError(f"Time series must be one-dimensional, got shape {values.shape}")
        if values.size < 2:
            raise InvalidInputError(f"Time series needs at least 2 points, got {values.size}")
        if not np.all(np.isfinite(values)):
            raise InvalidInputError(
                "Time series contains non-finite values",
                details=f"positions {np.flatnonzero(~np.isfinite(values)).tolist()[:10]}"
            )
        object.__setattr__(self, 'values', values)

    @property
    def T(self) -> int:
        return int(self.values.size)

    def __len__(self) -> int:
        return self.T


@dataclass(frozen=True, eq=False)
class WordSeries:
    """A word's term-frequency trajectory tagged with its group"""
    word: str
    group: str
    series: TimeSeries

    def __post_init__(self) -> None:
        if not self.word:
            raise InvalidInputError("Word token must be non-empty")
        if self.group not in GROUPS:
            raise InvalidInputError(
                f"Unknown group '{self.group}' for word '{self.word}'",
                suggestion="Groups are 'A' or 'B'"
            )


@dataclass(frozen=True, eq=False)
class GroupSeries:
    """Ordered word series of one group; the order defines tensor indices"""
    group: str
    words: Tuple[WordSeries, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, 'words', tuple(self.words))

    @property
    def T(self) -> int:
        return self.words[0].series.T if self.words else 0

    @property
    def tokens(self) -> List[str]:
        return [w.word for w in self.words]

    def matrix(self) -> np.ndarray:
        """Series values stacked into an (N, T) array"""
        if not self.words:
            return np.zeros((0, 0))
        return np.vstack([w.series.values for w in self.words])

    def __len__(self) -> int:
        return len(self.words)


@dataclass(frozen=True, eq=False)
class AlignmentPath:
    """Monotone warping path of index pairs (k, l), 0-based"""
    pairs: np.ndarray
    total_cost: float

    def __post_init__(self) -> None:
        object.__setattr__(self, 'pairs', _frozen_array(self.pairs, np.int64).reshape(-1, 2))

    def transposed(self) -> 'AlignmentPath':
        return AlignmentPath(pairs=self.pairs[:, ::-1], total_cost=self.total_cost)

    def __len__(self) -> int:
        return int(self.pairs.shape[0])


@dataclass(frozen=True, eq=False)
class RegressionFit:
    """OLS fit y' = alpha + beta * x' + residuals; scale is the variance of y' (1.0 if unknown)"""
    alpha: float
    beta: float
    residuals: np.ndarray
    scale: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, 'residuals', _frozen_array(self.residuals, np.float64))


@dataclass(frozen=True, eq=False)
class RegimeTrace:
    """Per-time-point posterior of the cointegrated regime"""
    posterior: np.ndarray
    c_prime: np.ndarray
    phi: float
    sigma2_c: float
    sigma2_n: float
    log_evidence_gain: float

    def __post_init__(self) -> None:
        object.__setattr__(self, 'posterior', _frozen_array(self.posterior, np.float64))
        object.__setattr__(self, 'c_prime', _frozen_array(self.c_prime, np.int8))


@dataclass(frozen=True, eq=False)
class EdgeRelation:
    """Correlation and lead-lag vectors of one cross-group word pair"""
    i: int
    j: int
    c: np.ndarray
    dt: np.ndarray

    def __post_init__(self) -> None:
        raw = np.asarray(self.c)
        if not np.all((raw == 0) | (raw == 1)):
            raise InvalidInputError(f"Edge ({self.i}, {self.j}): c must hold only 0 and 1")
        c = _frozen_array(raw, np.int8)
        dt = _frozen_array(self.dt, np.int64)
        if c.shape != dt.shape:
            raise InvalidInputError(f"Edge ({self.i}, {self.j}): c and dt lengths differ")
        object.__setattr__(self, 'c', c)
        object.__setattr__(self, 'dt', dt)

    @property
    def n_correlated(self) -> int:
        return int(self.c.sum())

    def to_dict(self) -> Dict[str, Any]:
        return {
            'i': int(self.i),
            'j': int(self.j),
            'c': self.c.tolist(),
            'dt': self.dt.tolist()
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'EdgeRelation':
        return cls(i=int(data['i']), j=int(data['j']), c=data['c'], dt=data['dt'])


@dataclass(frozen=True, eq=False)
class AugmentedBipartiteGraph:
    """Cross-group word graph; omitted pairs have c identically zero"""
    n_a: int
    n_b: int
    T: int
    tau_max: int
    edges: Tuple[EdgeRelation, ...] = ()
    words_a: Optional[Tuple[str, ...]] = None
    words_b: Optional[Tuple[str, ...]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, 'edges', tuple(self.edges))
        if self.words_a is not None:
            object.__setattr__(self, 'words_a', tuple(self.words_a))
        if self.words_b is not None:
            object.__setattr__(self, 'words_b', tuple(self.words_b))
        for edge in self.edges:
            if not (0 <= edge.i < self.n_a and 0 <= edge.j < self.n_b):
                raise InvalidInputError(f"Edge ({edge.i}, {edge.j}) outside dims ({self.n_a}, {self.n_b})")
            if edge.c.size != self.T:
                raise InvalidInputError(f"Edge ({edge.i}, {edge.j}) has {edge.c.size} points, expected {self.T}")
            if np.any(np.abs(edge.dt[edge.c == 1]) > self.tau_max):
                raise InvalidInputError(f"Edge ({edge.i}, {edge.j}) has a correlated lead-lag time beyond tau_max={self.tau_max}")

    @property
    def dims(self) -> Tuple[int, int, int]:
        return (self.n_a, self.n_b, self.T)

    def token_a(self, i: int) -> str:
        return self.words_a[i] if self.words_a else f"a{i}"

    def token_b(self, j: int) -> str:
        return self.words_b[j] if self.words_b else f"b{j}"

    def dense_c(self) -> np.ndarray:
        """Correlation indicators as an (N_A, N_B, T) int8 array"""
        c = np.zeros((self.n_a, self.n_b, self.T), dtype=np.int8)
        for edge in self.edges:
            c[edge.i, edge.j] = edge.c
        return c

    def dense_dt(self) -> np.ndarray:
        """Lead-lag offsets as an (N_A, N_B, T) array, zero where uncorrelated"""
        dt = np.zeros((self.n_a, self.n_b, self.T), dtype=np.int64)
        for edge in self.edges:
            dt[edge.i, edge.j] = np.where(edge.c == 1, edge.dt, 0)
        return dt

    def to_dict(self) -> Dict[str, Any]:
        result: Dict[str, Any] = {
            'dims': [self.n_a, self.n_b, self.T],
            'tau_max': self.tau_max,
            'edges': [e.to_dict() for e in self.edges]
        }
        if self.words_a is not None:
            result['words_a'] = list(self.words_a)
        if self.words_b is not None:
            result['words_b'] = list(self.words_b)
        return result

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'AugmentedBipartiteGraph':
        n_a, n_b, T = (int(v) for v in data['dims'])
        return cls(
            n_a=n_a,
            n_b=n_b,
            T=T,
            tau_max=int(data['tau_max']),
            edges=tuple(EdgeRelation.from_dict(e) for e in data['edges']),
            words_a=data.get('words_a'),
            words_b=data.get('words_b')
        )


@dataclass(frozen=True, eq=False)
class Partition:
    """Cluster labels, one per item"""
    labels: np.ndarray
    k: int
    wcss: float = 0.0
    empty_clusters: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, 'labels', _frozen_array(self.labels, np.int64))

    def __len__(self) -> int:
        return int(self.labels.size)

    def members(self, label: int) -> List[int]:
        return np.flatnonzero(self.labels == label).tolist()


@dataclass(frozen=True)
class IdeaCluster:
    """A cluster of words of one group"""
    group: str
    idea_id: int
    word_indices: Tuple[int, ...]
    top_words: Tuple[str, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {
            'group': self.group,
            'id': self.idea_id,
            'word_indices': list(self.word_indices),
            'words': list(self.top_words)
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'IdeaCluster':
        return cls(
            group=data['group'],
            idea_id=int(data['id']),
            word_indices=tuple(int(i) for i in data['word_indices']),
            top_words=tuple(data.get('words', ()))
        )


@dataclass(frozen=True)
class FlowSegment:
    """Inclusive time range with aggregated correlation and lead-lag time"""
    k_start: int
    k_end: int
    c_bar: int
    dt_bar: Optional[float] = None

    @property
    def length(self) -> int:
        return self.k_end - self.k_start + 1

    def to_dict(self) -> Dict[str, Any]:
        return {
            'k_start': self.k_start,
            'k_end': self.k_end,
            'c_bar': self.c_bar,
            'dt_bar': self.dt_bar
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'FlowSegment':
        dt_bar = data.get('dt_bar')
        return cls(
            k_start=int(data['k_start']),
            k_end=int(data['k_end']),
            c_bar=int(data['c_bar']),
            dt_bar=None if dt_bar is None else float(dt_bar)
        )


@dataclass(frozen=True)
class IdeaFlow:
    """Segments of one (idea in A, idea in B) pair"""
    idea_a: int
    idea_b: int
    segments: Tuple[FlowSegment, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'idea_a': self.idea_a,
            'idea_b': self.idea_b,
            'segments': [s.to_dict() for s in self.segments]
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'IdeaFlow':
        return cls(
            idea_a=int(data['idea_a']),
            idea_b=int(data['idea_b']),
            segments=tuple(FlowSegment.from_dict(s) for s in data['segments'])
        )


@dataclass(frozen=True)
class FlowReport:
    """Ideas per group, flows per idea pair and per-idea hotness"""
    T: int
    tau_max: int
    ideas_a: Tuple[IdeaCluster, ...]
    ideas_b: Tuple[IdeaCluster, ...]
    flows: Tuple[IdeaFlow, ...]
    hotness: Dict[str, List[int]] = field(default_factory=dict)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def flow(self, idea_a: int, idea_b: int) -> Optional[IdeaFlow]:
        for f in self.flows:
            if f.idea_a == idea_a and f.idea_b == idea_b:
                return f
        return None

    def labels(self, group: str, n_words: int) -> np.ndarray:
        """Per-word idea labels of one group (-1 for words in no idea)"""
        labels = np.full(n_words, -1, dtype=np.int64)
        for idea in (self.ideas_a if group == 'A' else self.ideas_b):
            labels[list(idea.word_indices)] = idea.idea_id
        return labels

    def to_dict(self) -> Dict[str, Any]:
        result = dict(self.metadata)
        result.update({
            'T': self.T,
            'tau_max': self.tau_max,
            'ideas': [i.to_dict() for i in self.ideas_a] + [i.to_dict() for i in self.ideas_b],
            'flows': [f.to_dict() for f in self.flows],
            'hotness': {key: list(values) for key, values in self.hotness.items()}
        })
        return result

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'FlowReport':
        ideas = [IdeaCluster.from_dict(i) for i in data['ideas']]
        known = {'T', 'tau_max', 'ideas', 'flows', 'hotness'}
        return cls(
            T=int(data['T']),
            tau_max=int(data['tau_max']),
            ideas_a=tuple(i for i in ideas if i.group == 'A'),
            ideas_b=tuple(i for i in ideas if i.group == 'B'),
            flows=tuple(IdeaFlow.from_dict(f) for f in data['flows']),
            hotness={k: [int(v) for v in vals] for k, vals in data.get('hotness', {}).items()},
            metadata={k: v for k, v in data.items() if k not in known}
        )


@dataclass(frozen=True)
class PairLeadership:
    """Length-weighted mean lead-lag time of one idea pair"""
    idea_a: int
    idea_b: int
    mean_dt: float
    correlated_points: int

    @property
    def leader(self) -> str:
        if self.mean_dt > 0:
            return 'A'
        if self.mean_dt < 0:
            return 'B'
        return 'none'

    def to_dict(self) -> Dict[str, Any]:
        return {
            'idea_a': self.idea_a,
            'idea_b': self.idea_b,
            'mean_dt': self.mean_dt,
            'correlated_points': self.correlated_points,
            'leader': self.leader
        }


@dataclass(frozen=True)
class LeadershipSummary:
    """Which group leads across all correlated idea pairs"""
    pairs: Tuple[PairLeadership, ...] = ()

    @property
    def counts(self) -> Dict[str, int]:
        counts = {'A': 0, 'B': 0, 'none': 0}
        for pair in self.pairs:
            counts[pair.leader] += 1
        return counts

    @property
    def shares(self) -> Dict[str, float]:
        total = len(self.pairs)
        return {k: (v / total if total else 0.0) for k, v in self.counts.items()}

    def to_dict(self) -> Dict[str, Any]:
        return {
            'pairs': [p.to_dict() for p in self.pairs],
            'counts': self.counts,
            'shares': self.shares
        }


@dataclass(frozen=True)
class MetricReport:
    """Scores of one predicted flow report against ground truth"""
    flow_f1: float
    flowlead_f1: float
    flowleadtime_f1: float
    mse: Optional[float]
    nmi_a: float
    nmi_b: float
    runtime_seconds: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            'flow_f1': self.flow_f1,
            'flowlead_f1': self.flowlead_f1,
            'flowleadtime_f1': self.flowleadtime_f1,
            'mse': self.mse,
            'nmi_a': self.nmi_a,
            'nmi_b': self.nmi_b,
            'runtime_seconds': self.runtime_seconds
        }


def idea_key(group: str, idea_id: int) -> str:
    """Hotness key of an idea, e.g. 'A:3'"""
    return f"{group}:{idea_id}"


def as_series_list(series: Sequence[Any]) -> List[TimeSeries]:
    return [s if isinstance(s, TimeSeries) else TimeSeries(np.asarray(s, dtype=float)) for s in series]
