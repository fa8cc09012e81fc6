"""
Augmented bipartite word graph construction and its JSON interchange format
"""

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional, List, Tuple, Union, Callable, Iterable

import numpy as np

from .bcc import detect_cointegration
from .config import DtwConfig, BccConfig
from .dtw import dtw_align, offsets_from_path, warp_onto_reference
from .exceptions import DimensionError, FormatError, InvalidInputError
from .models import (
    TimeSeries,
    WordSeries,
    GroupSeries,
    AlignmentPath,
    EdgeRelation,
    AugmentedBipartiteGraph
)
from .series import znormalize, validate_group_pair

logger = logging.getLogger(__name__)

Aligner = Callable[[TimeSeries, TimeSeries, DtwConfig], AlignmentPath]
PathLike = Union[str, Path]


def _series_of(item: Union[WordSeries, TimeSeries]) -> TimeSeries:
    return item.series if isinstance(item, WordSeries) else item


def _edge_from_normalized(
    i: int,
    j: int,
    xs: TimeSeries,
    ys: TimeSeries,
    dtw_cfg: DtwConfig,
    bcc_cfg: BccConfig,
    aligner: Aligner
) -> Optional[EdgeRelation]:
    if not xs.values.any() or not ys.values.any():
        return None
    T = xs.T
    path = aligner(xs, ys, dtw_cfg)
    y_warped = warp_onto_reference(path, ys, T)
    c, global_pass = detect_cointegration(xs.values, y_warped, bcc_cfg)
    if not global_pass or not c.any():
        return None
    dt = np.where(c == 1, offsets_from_path(path, T), 0)
    return EdgeRelation(i=i, j=j, c=c, dt=dt)


def build_edge(
    x: Union[WordSeries, TimeSeries],
    y: Union[WordSeries, TimeSeries],
    dtw_cfg: DtwConfig = DtwConfig(),
    bcc_cfg: BccConfig = BccConfig(),
    i: int = 0,
    j: int = 0,
    aligner: Aligner = dtw_align
) -> Optional[EdgeRelation]:
    """
    Correlation and lead-lag vectors of one cross-group word pair.

    Both series are z-normalized, y is warped onto x's clock (values
    aligned to the same point are averaged), and the cointegration
    detector runs on the aligned pair.

    Args:
        x: Word of group A
        y: Word of group B
        dtw_cfg: Band configuration
        bcc_cfg: Cointegration thresholds
        i: Index of x in group A
        j: Index of y in group B
        aligner: Alignment routine, dtw_align unless a baseline swaps it

    Returns:
        EdgeRelation, or None when the pair is uncorrelated
    """
    xs = _series_of(x)
    ys = _series_of(y)
    if xs.T != ys.T:
        raise DimensionError(f"Cannot pair series of lengths {xs.T} and {ys.T}")
    return _edge_from_normalized(i, j, znormalize(xs), znormalize(ys), dtw_cfg, bcc_cfg, aligner)


def _edge_task(args: Tuple) -> Optional[EdgeRelation]:
    return _edge_from_normalized(*args)


def _pair_tasks(
    xs: List[TimeSeries],
    ys: List[TimeSeries],
    dtw_cfg: DtwConfig,
    bcc_cfg: BccConfig,
    aligner: Aligner,
    exclude_self: bool
) -> Iterable[Tuple]:
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            if exclude_self and i == j:
                continue
            yield (i, j, x, y, dtw_cfg, bcc_cfg, aligner)


def build_graph(
    a: GroupSeries,
    b: GroupSeries,
    dtw_cfg: DtwConfig = DtwConfig(),
    bcc_cfg: BccConfig = BccConfig(),
    workers: int = 1,
    exclude_self: bool = False,
    aligner: Aligner = dtw_align
) -> AugmentedBipartiteGraph:
    """
    Run the pairwise edge builder over every (i, j) word pair.

    Edges come back in canonical (i, j) order whatever the number of
    worker processes.

    Args:
        a: Group A series
        b: Group B series
        dtw_cfg: Band configuration
        bcc_cfg: Cointegration thresholds
        workers: Worker processes; 1 runs in-process
        exclude_self: Skip pairs with i == j (a dataset paired with itself)
        aligner: Alignment routine

    Returns:
        AugmentedBipartiteGraph with uncorrelated pairs omitted
    """
    n_a, n_b, T = validate_group_pair(a, b)
    dtw_cfg.validate(T)
    bcc_cfg.validate()

    xs = [znormalize(w.series) for w in a.words]
    ys = [znormalize(w.series) for w in b.words]
    tasks = _pair_tasks(xs, ys, dtw_cfg, bcc_cfg, aligner, exclude_self)

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(_edge_task, tasks, chunksize=32))
    else:
        results = [_edge_task(task) for task in tasks]

    edges = tuple(edge for edge in results if edge is not None)
    logger.info("Built graph %dx%d over T=%d: %d correlated pairs", n_a, n_b, T, len(edges))
    return AugmentedBipartiteGraph(
        n_a=n_a,
        n_b=n_b,
        T=T,
        tau_max=dtw_cfg.tau_max,
        edges=edges,
        words_a=tuple(a.tokens),
        words_b=tuple(b.tokens)
    )


def graph_to_json(graph: AugmentedBipartiteGraph, metadata: Optional[dict] = None) -> str:
    """Compact JSON; metadata keys are written alongside and ignored on read"""
    data = dict(metadata or {})
    data.update(graph.to_dict())
    return json.dumps(data, separators=(',', ':'))


def write_graph(path: PathLike, graph: AugmentedBipartiteGraph, metadata: Optional[dict] = None) -> None:
    Path(path).write_text(graph_to_json(graph, metadata) + '\n', encoding='utf-8')


def read_graph(path: PathLike) -> AugmentedBipartiteGraph:
    """
    Load a serialized graph.

    Raises:
        FormatError: if the file is not a valid graph document
    """
    try:
        data = json.loads(Path(path).read_text(encoding='utf-8'))
        return AugmentedBipartiteGraph.from_dict(data)
    except (OSError, UnicodeDecodeError, json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        raise FormatError(f"Cannot read graph: {e}", source=str(path))
    except InvalidInputError as e:
        raise FormatError(f"Invalid graph: {e.message}", source=str(path))
