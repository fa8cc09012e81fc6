"""
ideaflow - Lead-lag idea flows between two groups of word time series
"""

from .config import (
    DtwConfig,
    BccConfig,
    ParafacConfig,
    KMeansConfig,
    FlowConfig,
    SynthConfig,
    IngestConfig,
    RunConfig
)
from .models import (
    TimeSeries,
    WordSeries,
    GroupSeries,
    AlignmentPath,
    EdgeRelation,
    AugmentedBipartiteGraph,
    Partition,
    IdeaCluster,
    FlowSegment,
    IdeaFlow,
    FlowReport,
    LeadershipSummary,
    MetricReport
)
from .exceptions import (
    IdeaFlowError,
    InvalidInputError,
    DimensionError,
    UniquenessError,
    FormatError,
    EmptyGroupError,
    ConfigurationError,
    DegenerateRegressorError,
    InfeasibleBandError,
    EmptySelectionError,
    EmptyTensorError,
    ArchiveError
)
from .series import znormalize, read_series_csv, write_series_csv
from .dtw import dtw_align, dtw_costs, offsets_from_path, best_global_shift
from .bcc import fit_regression, regime_posterior, detect_cointegration
from .graph import build_edge, build_graph, read_graph, write_graph
from .tensor import SparseTensor4, FactorSet, build_tensor, greedy_parafac, residual_norm, subtensor
from .clustering import feature_rows, kmeans, nmi
from .flow import partition_words, segment_timepoints, aggregate_flows, summarize_leadership, track_idea_flows
from .synth import GroundTruth, generate_ground_truth, generate_graph
from .evaluation import match_ideas, flow_f1_suite, leadlag_mse, evaluate_run, cluster_series
from .baselines import run_baseline
from .ucr import UcrDataset, UcrArchiveClient, load_ucr
from .ingest import build_group_series, demo_corpus, load_stopwords
from .version import __version__

__all__ = [
    'DtwConfig',
    'BccConfig',
    'ParafacConfig',
    'KMeansConfig',
    'FlowConfig',
    'SynthConfig',
    'IngestConfig',
    'RunConfig',
    'TimeSeries',
    'WordSeries',
    'GroupSeries',
    'AlignmentPath',
    'EdgeRelation',
    'AugmentedBipartiteGraph',
    'Partition',
    'IdeaCluster',
    'FlowSegment',
    'IdeaFlow',
    'FlowReport',
    'LeadershipSummary',
    'MetricReport',
    'IdeaFlowError',
    'InvalidInputError',
    'DimensionError',
    'UniquenessError',
    'FormatError',
    'EmptyGroupError',
    'ConfigurationError',
    'DegenerateRegressorError',
    'InfeasibleBandError',
    'EmptySelectionError',
    'EmptyTensorError',
    'ArchiveError',
    'znormalize',
    'read_series_csv',
    'write_series_csv',
    'dtw_align',
    'dtw_costs',
    'offsets_from_path',
    'best_global_shift',
    'fit_regression',
    'regime_posterior',
    'detect_cointegration',
    'build_edge',
    'build_graph',
    'read_graph',
    'write_graph',
    'SparseTensor4',
    'FactorSet',
    'build_tensor',
    'greedy_parafac',
    'residual_norm',
    'subtensor',
    'feature_rows',
    'kmeans',
    'nmi',
    'partition_words',
    'segment_timepoints',
    'aggregate_flows',
    'summarize_leadership',
    'track_idea_flows',
    'GroundTruth',
    'generate_ground_truth',
    'generate_graph',
    'match_ideas',
    'flow_f1_suite',
    'leadlag_mse',
    'evaluate_run',
    'cluster_series',
    'run_baseline',
    'UcrDataset',
    'UcrArchiveClient',
    'load_ucr',
    'build_group_series',
    'demo_corpus',
    'load_stopwords',
    '__version__'
]
