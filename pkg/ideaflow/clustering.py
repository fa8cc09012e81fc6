"""
K-means over factor feature rows and the NMI clustering score
"""

import logging
import warnings
from typing import Union, Sequence

import numpy as np
from sklearn.cluster import KMeans
from sklearn.exceptions import ConvergenceWarning
from sklearn.metrics import normalized_mutual_info_score

from .config import KMeansConfig
from .exceptions import ConfigurationError, DimensionError
from .models import Partition
from .tensor import FactorSet

logger = logging.getLogger(__name__)

MODES = {'u': 0, 'v': 1, 'w': 2, 'h': 3}

Labels = Union[Partition, Sequence[int], np.ndarray]


def feature_rows(f: FactorSet, mode: str) -> np.ndarray:
    """
    Feature matrix of one factor mode: row i is [f1_i, ..., fq_i].

    Args:
        f: Factors of a rank-q decomposition
        mode: 'u' (group A words), 'v' (group B words), 'w' (time points) or 'h'

    Returns:
        Array of shape (mode size, q)
    """
    if mode not in MODES:
        raise ConfigurationError(f"Unknown factor mode '{mode}'", suggestion="Use one of u, v, w, h")
    return np.array(f.factors[MODES[mode]], dtype=np.float64)


def canonical_labels(labels: Sequence[int]) -> np.ndarray:
    """Renumber labels in order of first appearance"""
    _, first, inverse = np.unique(np.asarray(labels), return_index=True, return_inverse=True)
    rank = np.argsort(np.argsort(first))
    return rank[inverse.reshape(-1)].astype(np.int64)


def kmeans(rows: np.ndarray, cfg: KMeansConfig) -> Partition:
    """
    Best-of-restarts k-means++ / Lloyd clustering of feature rows.

    Labels are renumbered by first appearance, so equal partitions get
    equal label vectors whatever the internal center order.

    Raises:
        ConfigurationError: if k exceeds the number of rows
    """
    rows = np.asarray(rows, dtype=np.float64)
    if rows.ndim == 1:
        rows = rows[:, None]
    cfg.validate(rows.shape[0])

    model = KMeans(
        n_clusters=cfg.k,
        init='k-means++',
        n_init=cfg.restarts,
        max_iter=cfg.max_iters,
        tol=0.0,
        random_state=cfg.seed,
        algorithm='lloyd'
    )
    with warnings.catch_warnings():
        # duplicate rows make sklearn warn that fewer distinct clusters exist
        warnings.simplefilter('ignore', ConvergenceWarning)
        labels = model.fit_predict(rows)

    labels = canonical_labels(labels)
    used = int(np.unique(labels).size)
    if used < cfg.k:
        logger.debug("k-means left %d of %d clusters empty", cfg.k - used, cfg.k)
    return Partition(labels=labels, k=cfg.k, wcss=float(model.inertia_), empty_clusters=cfg.k - used)


def _labels(p: Labels) -> np.ndarray:
    return p.labels if isinstance(p, Partition) else np.asarray(p)


def nmi(p: Labels, q: Labels) -> float:
    """
    Normalized mutual information with geometric-mean normalization.

    Two single-cluster partitions score 1; a single-cluster partition
    against any other scores 0.

    Raises:
        DimensionError: if the partitions cover different item counts
    """
    a = _labels(p)
    b = _labels(q)
    if a.size != b.size:
        raise DimensionError(f"Partitions have {a.size} and {b.size} items")
    if a.size == 0:
        return 1.0
    score = normalized_mutual_info_score(a, b, average_method='geometric')
    return float(min(max(score, 0.0), 1.0))
