"""
Configuration dataclasses for every pipeline stage
"""

from dataclasses import dataclass, asdict, field, replace
from typing import Optional, Tuple, Dict, Any, FrozenSet, Literal

from .exceptions import ConfigurationError

TensorVariant = Literal['x1', 'x2', 'x3']
VARIANTS: Tuple[str, ...] = ('x1', 'x2', 'x3')

SECONDS_PER_DAY = 86400
MAX_RANK = 1024


def _check(condition: bool, message: str, suggestion: Optional[str] = None) -> None:
    if not condition:
        raise ConfigurationError(message, suggestion=suggestion)


def _check_range(name: str, bounds: Tuple[int, int]) -> None:
    lo, hi = bounds
    _check(lo <= hi, f"{name} range ({lo}, {hi}) is empty")


@dataclass(frozen=True)
class DtwConfig:
    """Band half-width of the constrained alignment"""
    tau_max: int = 6

    def validate(self, T: Optional[int] = None) -> 'DtwConfig':
        _check(self.tau_max >= 0, f"tau_max must be non-negative, got {self.tau_max}")
        if T is not None:
            _check(
                self.tau_max <= T - 1,
                f"tau_max={self.tau_max} exceeds T-1={T - 1}",
                suggestion="Lower --tau-max or supply longer series"
            )
        return self

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class BccConfig:
    """Thresholds and priors of the switching-regime cointegration detector"""
    theta_local: float = 0.7
    theta_global: float = 0.0
    rho_stay: float = 0.95
    variance_floor: float = 1e-6

    def validate(self) -> 'BccConfig':
        _check(0.0 < self.theta_local < 1.0, f"theta_local must lie in (0, 1), got {self.theta_local}")
        _check(0.0 < self.rho_stay < 1.0, f"rho_stay must lie in (0, 1), got {self.rho_stay}")
        _check(self.variance_floor > 0.0, f"variance_floor must be positive, got {self.variance_floor}")
        return self

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class ParafacConfig:
    """Stopping rule of each rank-1 alternating least squares fit"""
    iters: int = 200
    tol: float = 1e-6

    def validate(self) -> 'ParafacConfig':
        _check(self.iters >= 1, f"ALS iterations must be positive, got {self.iters}")
        _check(self.tol >= 0.0, f"ALS tolerance must be non-negative, got {self.tol}")
        return self

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class KMeansConfig:
    """K-means settings; k is always supplied by the caller"""
    k: int
    max_iters: int = 300
    restarts: int = 10
    seed: Optional[int] = 0

    def validate(self, n_items: Optional[int] = None) -> 'KMeansConfig':
        _check(self.k >= 1, f"k must be positive, got {self.k}")
        _check(self.max_iters >= 1, f"max_iters must be positive, got {self.max_iters}")
        _check(self.restarts >= 1, f"restarts must be positive, got {self.restarts}")
        if n_items is not None:
            _check(
                self.k <= n_items,
                f"k={self.k} exceeds the number of items ({n_items})",
                suggestion="Request fewer clusters"
            )
        return self

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class FlowConfig:
    """Partition, segmentation and aggregation settings"""
    k_a: int = 2
    k_b: int = 2
    variant: str = 'x3'
    rank: Optional[int] = None
    rank_seg: int = 4
    k_t: int = 4
    threshold: float = 0.5
    seed: int = 0
    restarts: int = 10
    kmeans_max_iters: int = 300
    parafac: ParafacConfig = field(default_factory=ParafacConfig)

    @property
    def effective_rank(self) -> int:
        """Rank of the word-level factorization (k_a + k_b unless overridden)"""
        return self.rank if self.rank is not None else self.k_a + self.k_b

    def kmeans(self, k: int, seed_offset: int = 0) -> KMeansConfig:
        return KMeansConfig(
            k=k,
            max_iters=self.kmeans_max_iters,
            restarts=self.restarts,
            seed=self.seed + seed_offset
        )

    def validate(self) -> 'FlowConfig':
        _check(self.variant in VARIANTS, f"Unknown tensor variant '{self.variant}'",
               suggestion=f"Use one of {', '.join(VARIANTS)}")
        _check(self.k_a >= 1 and self.k_b >= 1, "k_a and k_b must be positive")
        _check(1 <= self.effective_rank <= MAX_RANK,
               f"rank must lie in [1, {MAX_RANK}], got {self.effective_rank}")
        _check(1 <= self.rank_seg <= MAX_RANK,
               f"rank_seg must lie in [1, {MAX_RANK}], got {self.rank_seg}")
        _check(self.k_t >= 1, f"k_t must be positive, got {self.k_t}")
        _check(0.0 < self.threshold <= 1.0, f"threshold must lie in (0, 1], got {self.threshold}")
        _check(self.restarts >= 1, f"restarts must be positive, got {self.restarts}")
        self.parafac.validate()
        return self

    def to_dict(self) -> Dict[str, Any]:
        result = asdict(self)
        result['rank'] = self.effective_rank
        return result


@dataclass(frozen=True)
class SynthConfig:
    """Synthetic ground-truth generator settings"""
    noise_level: float = 0.0
    ideas_per_group: Tuple[int, int] = (2, 6)
    words_per_idea: Tuple[int, int] = (10, 30)
    leadlag: Tuple[int, int] = (-6, 6)
    period_length: Tuple[int, int] = (20, 40)
    periods_per_flow: Tuple[int, int] = (1, 3)
    T: int = 200
    tau_max: int = 6
    seed: int = 0
    max_retries: int = 20

    def validate(self) -> 'SynthConfig':
        _check(0.0 <= self.noise_level < 1.0, f"noise level must lie in [0, 1), got {self.noise_level}")
        for name in ('ideas_per_group', 'words_per_idea', 'leadlag', 'period_length', 'periods_per_flow'):
            _check_range(name, getattr(self, name))
        _check(self.ideas_per_group[0] >= 1, "ideas_per_group must start at 1 or more")
        _check(self.words_per_idea[0] >= 1, "words_per_idea must start at 1 or more")
        _check(self.period_length[0] >= 1, "period_length must start at 1 or more")
        _check(self.periods_per_flow[0] >= 1, "periods_per_flow must start at 1 or more")
        _check(self.T >= 2, f"T must be at least 2, got {self.T}")
        _check(0 <= self.tau_max <= self.T - 1, f"tau_max must lie in [0, T-1], got {self.tau_max}")
        lo, hi = self.leadlag
        _check(max(lo, -self.tau_max) <= min(hi, self.tau_max),
               "lead-lag range does not intersect [-tau_max, tau_max]")
        _check(self.max_retries >= 1, "max_retries must be positive")
        return self

    def to_dict(self) -> Dict[str, Any]:
        return {k: list(v) if isinstance(v, tuple) else v for k, v in asdict(self).items()}


@dataclass(frozen=True)
class IngestConfig:
    """Corpus tokenization and binning settings"""
    bin_width: int = 2 * SECONDS_PER_DAY
    stopwords: FrozenSet[str] = frozenset()
    rare_threshold: float = 5.0
    lowercase: bool = True
    strip_punctuation: bool = True
    min_token_length: int = 2
    t_start: Optional[int] = None
    t_end: Optional[int] = None

    def validate(self) -> 'IngestConfig':
        _check(self.bin_width > 0, f"bin width must be positive, got {self.bin_width}")
        _check(self.rare_threshold >= 0, f"rare threshold must be non-negative, got {self.rare_threshold}")
        _check(self.min_token_length >= 1, "min_token_length must be positive")
        if self.t_start is not None and self.t_end is not None:
            _check(self.t_start < self.t_end, "t_start must precede t_end")
        return self

    def to_dict(self) -> Dict[str, Any]:
        result = asdict(self)
        result['stopwords'] = len(self.stopwords)
        return result


@dataclass(frozen=True)
class RunConfig:
    """Every tunable of one CLI run; echoed into each artifact"""
    tau_max: int = 6
    theta_local: float = 0.7
    theta_global: float = 0.0
    rho_stay: float = 0.95
    variance_floor: float = 1e-6
    variant: str = 'x3'
    rank: Optional[int] = None
    rank_seg: int = 4
    k_a: int = 2
    k_b: int = 2
    k_t: int = 4
    threshold: float = 0.5
    seed: int = 0
    restarts: int = 10
    bin_width_days: float = 2.0
    rare_threshold: float = 5.0
    stopwords: Optional[str] = None
    workers: int = 1

    @classmethod
    def from_args(cls, args: Any) -> 'RunConfig':
        """Build from an argparse namespace; absent attributes keep defaults"""
        values = {
            name: getattr(args, name)
            for name in cls.__dataclass_fields__
            if getattr(args, name, None) is not None
        }
        return cls(**values).validate()

    def dtw(self) -> DtwConfig:
        return DtwConfig(tau_max=self.tau_max)

    def bcc(self) -> BccConfig:
        return BccConfig(
            theta_local=self.theta_local,
            theta_global=self.theta_global,
            rho_stay=self.rho_stay,
            variance_floor=self.variance_floor
        )

    def flow(self, **overrides: Any) -> FlowConfig:
        cfg = FlowConfig(
            k_a=self.k_a,
            k_b=self.k_b,
            variant=self.variant,
            rank=self.rank,
            rank_seg=self.rank_seg,
            k_t=self.k_t,
            threshold=self.threshold,
            seed=self.seed,
            restarts=self.restarts
        )
        return replace(cfg, **overrides) if overrides else cfg

    def ingest(self, stopwords: FrozenSet[str]) -> IngestConfig:
        return IngestConfig(
            bin_width=int(round(self.bin_width_days * SECONDS_PER_DAY)),
            stopwords=stopwords,
            rare_threshold=self.rare_threshold
        )

    def validate(self) -> 'RunConfig':
        self.dtw().validate()
        self.bcc().validate()
        self.flow().validate()
        _check(self.bin_width_days > 0, f"bin width must be positive, got {self.bin_width_days}")
        _check(self.rare_threshold >= 0, f"rare threshold must be non-negative, got {self.rare_threshold}")
        _check(self.workers >= 1, f"workers must be positive, got {self.workers}")
        return self

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
