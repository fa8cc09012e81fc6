"""
Baseline series clusterings: raw values (B1), DTW kernel spectral (B2)
and the flow pipeline with a single global shift (B3)
"""

import logging
import warnings
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from sklearn.cluster import SpectralClustering

from .clustering import canonical_labels, kmeans
from .config import BccConfig, DtwConfig, KMeansConfig
from .dtw import dtw_costs
from .evaluation import cluster_series
from .exceptions import ConfigurationError
from .models import Partition

logger = logging.getLogger(__name__)

BASELINES = ('B1', 'B2', 'B3')

# Recorded in every B2 params column
B2_KERNEL = 'gaussian(dtw), sigma=median'


def _matrix(data: Union[np.ndarray, Sequence]) -> np.ndarray:
    return np.vstack([np.asarray(getattr(s, 'values', s), dtype=np.float64) for s in data])


def _dtw_row(args: Tuple[int, np.ndarray, DtwConfig]) -> np.ndarray:
    i, values, cfg = args
    row = np.zeros(values.shape[0])
    if i + 1 < values.shape[0]:
        row[i + 1:] = np.sqrt(dtw_costs(values[i], values[i + 1:], cfg))
    return row


def dtw_distance_matrix(data: Union[np.ndarray, Sequence], cfg: DtwConfig = DtwConfig(), workers: int = 1) -> np.ndarray:
    """Symmetric matrix of banded DTW distances (square root of path cost)"""
    values = _matrix(data)
    tasks = [(i, values, cfg) for i in range(values.shape[0])]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            rows = list(executor.map(_dtw_row, tasks))
    else:
        rows = [_dtw_row(task) for task in tasks]
    upper = np.vstack(rows)
    return upper + upper.T


def dtw_kernel(distances: np.ndarray) -> np.ndarray:
    """Gaussian affinity exp(-d^2 / 2 sigma^2) with sigma the median pairwise distance"""
    off_diagonal = distances[np.triu_indices_from(distances, k=1)]
    sigma = float(np.median(off_diagonal)) if off_diagonal.size else 1.0
    if sigma <= 0.0:
        sigma = 1.0
    return np.exp(-distances ** 2 / (2.0 * sigma ** 2))


def raw_value_kmeans(data: Union[np.ndarray, Sequence], k: int, seed: int = 0, restarts: int = 10) -> Partition:
    """B1: k-means on the raw value vectors"""
    return kmeans(_matrix(data), KMeansConfig(k=k, restarts=restarts, seed=seed))


def dtw_spectral(
    data: Union[np.ndarray, Sequence],
    k: int,
    seed: int = 0,
    cfg: DtwConfig = DtwConfig(),
    workers: int = 1,
    distances: Optional[np.ndarray] = None
) -> Partition:
    """B2: normalized-cut spectral embedding of the DTW kernel, then k-means"""
    values = _matrix(data)
    KMeansConfig(k=k).validate(values.shape[0])
    if distances is None:
        distances = dtw_distance_matrix(values, cfg, workers)
    model = SpectralClustering(
        n_clusters=k,
        affinity='precomputed',
        assign_labels='kmeans',
        random_state=seed,
        n_init=10
    )
    with warnings.catch_warnings():
        # disconnected affinity graphs only degrade the embedding
        warnings.simplefilter('ignore', UserWarning)
        labels = model.fit_predict(dtw_kernel(distances))
    return Partition(labels=canonical_labels(labels), k=k)


def run_baseline(
    kind: str,
    data: Union[np.ndarray, Sequence],
    k: int,
    seed: int = 0,
    dtw_cfg: DtwConfig = DtwConfig(),
    bcc_cfg: BccConfig = BccConfig(),
    workers: int = 1
) -> Partition:
    """
    Cluster a series set with one of the baselines.

    Args:
        kind: 'B1', 'B2' or 'B3'
        data: (N, T) values or a sequence of series
        k: Number of clusters
        seed: Random seed
        dtw_cfg: Band of B2's distances and B3's shift range
        bcc_cfg: Cointegration thresholds of B3

    Raises:
        ConfigurationError: on an unknown kind or k > N
    """
    kind = kind.upper()
    if kind not in BASELINES:
        raise ConfigurationError(f"Unknown baseline '{kind}'", suggestion=f"Use one of {', '.join(BASELINES)}")
    KMeansConfig(k=k).validate(len(data))
    if kind == 'B1':
        return raw_value_kmeans(data, k, seed)
    if kind == 'B2':
        return dtw_spectral(data, k, seed, dtw_cfg, workers)
    return cluster_series(data, k, method='b3', seed=seed, dtw_cfg=dtw_cfg, bcc_cfg=bcc_cfg, workers=workers)
