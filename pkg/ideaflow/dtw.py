"""
Band-constrained dynamic time warping and lead-lag offset extraction
"""

import math
from typing import List, Union, Sequence

import numpy as np
from scipy.spatial.distance import cdist

from .config import DtwConfig
from .exceptions import DimensionError, InfeasibleBandError
from .models import TimeSeries, AlignmentPath

SeriesLike = Union[TimeSeries, Sequence[float], np.ndarray]

# Backtracking moves, in tie-break order: (1,1), (1,0), (0,1)
_DIAG, _DOWN, _RIGHT = 0, 1, 2


def _values(series: SeriesLike) -> np.ndarray:
    if isinstance(series, TimeSeries):
        return series.values
    return TimeSeries(np.asarray(series, dtype=np.float64)).values


def dtw_align(x: SeriesLike, y: SeriesLike, cfg: DtwConfig = DtwConfig()) -> AlignmentPath:
    """
    Align two equal-length series under a Sakoe-Chiba band.

    The path minimizes the cumulative squared difference over monotone
    paths built from the symmetric steps (1,1), (1,0), (0,1) with
    |l - k| <= tau_max. Equal-cost predecessors are resolved in that
    order, so the result is deterministic.

    Args:
        x: Reference series (its clock indexes the offsets)
        y: Series aligned onto x
        cfg: Band configuration

    Returns:
        AlignmentPath from (0, 0) to (T-1, T-1)

    Raises:
        DimensionError: if lengths differ
        ConfigurationError: if tau_max exceeds T-1
        InfeasibleBandError: if no admissible path reaches (T-1, T-1)
    """
    xv = _values(x)
    yv = _values(y)
    if xv.size != yv.size:
        raise DimensionError(f"Cannot align series of lengths {xv.size} and {yv.size}")
    T = int(xv.size)
    tau = cfg.validate(T).tau_max

    cost = cdist(xv[:, None], yv[:, None], 'sqeuclidean').tolist()
    inf = math.inf
    D = [[inf] * T for _ in range(T)]
    move = [[-1] * T for _ in range(T)]

    for k in range(T):
        row_cost = cost[k]
        row = D[k]
        prev = D[k - 1] if k > 0 else None
        moves = move[k]
        for l in range(max(0, k - tau), min(T - 1, k + tau) + 1):
            if k == 0 and l == 0:
                row[0] = row_cost[0]
                continue
            best = inf
            step = -1
            if prev is not None and l > 0 and prev[l - 1] < best:
                best = prev[l - 1]
                step = _DIAG
            if prev is not None and prev[l] < best:
                best = prev[l]
                step = _DOWN
            if l > 0 and row[l - 1] < best:
                best = row[l - 1]
                step = _RIGHT
            if step >= 0:
                row[l] = row_cost[l] + best
                moves[l] = step

    if D[T - 1][T - 1] == inf:
        raise InfeasibleBandError(f"No admissible path within band tau_max={tau} for T={T}")

    pairs = []
    k = l = T - 1
    while True:
        pairs.append((k, l))
        if k == 0 and l == 0:
            break
        step = move[k][l]
        if step == _DIAG:
            k, l = k - 1, l - 1
        elif step == _DOWN:
            k -= 1
        else:
            l -= 1
    pairs.reverse()
    return AlignmentPath(pairs=np.array(pairs, dtype=np.int64), total_cost=float(D[T - 1][T - 1]))


def dtw_costs(x: SeriesLike, ys: Union[np.ndarray, Sequence[SeriesLike]], cfg: DtwConfig = DtwConfig()) -> np.ndarray:
    """
    Banded DTW path costs of x against every row of ys at once.

    Runs the same recursion as dtw_align with each cell vectorised over
    the rows of ys, so every cost equals dtw_align(x, y).total_cost
    exactly. Paths are not kept.

    Raises:
        DimensionError: if a row of ys differs in length from x
        ConfigurationError: if tau_max exceeds T-1
    """
    xv = _values(x)
    if isinstance(ys, np.ndarray):
        Y = np.atleast_2d(ys.astype(np.float64))
    else:
        Y = np.vstack([_values(y) for y in ys])
    if Y.shape[1] != xv.size:
        raise DimensionError(f"Cannot align series of lengths {xv.size} and {Y.shape[1]}")
    T = int(xv.size)
    tau = cfg.validate(T).tau_max
    P = Y.shape[0]

    prev = np.full((T, P), math.inf)
    for k in range(T):
        row = np.full((T, P), math.inf)
        lo, hi = max(0, k - tau), min(T - 1, k + tau)
        cost = cdist(np.array([[xv[k]]]), Y[:, lo:hi + 1].reshape(-1, 1), 'sqeuclidean').reshape(P, -1).T
        for l in range(lo, hi + 1):
            if k == 0 and l == 0:
                row[0] = cost[0]
                continue
            best = np.full(P, math.inf)
            if k > 0 and l > 0:
                best = prev[l - 1]
            if k > 0:
                best = np.minimum(best, prev[l])
            if l > 0:
                best = np.minimum(best, row[l - 1])
            row[l] = cost[l - lo] + best
        prev = row
    return prev[T - 1].copy()


def path_cost(x: SeriesLike, y: SeriesLike, path: AlignmentPath) -> float:
    """Cumulative squared difference along an arbitrary path"""
    xv = _values(x)
    yv = _values(y)
    k, l = path.pairs[:, 0], path.pairs[:, 1]
    return float(np.sum((xv[k] - yv[l]) ** 2))


def offsets_from_path(path: AlignmentPath, T: int) -> np.ndarray:
    """
    Per-time-point lead-lag offsets on the reference clock.

    dt[k] is the median of (l - k) over every l aligned to k, truncated
    toward zero.
    """
    k = path.pairs[:, 0]
    lag = path.pairs[:, 1] - k
    boundaries = np.flatnonzero(np.diff(k)) + 1
    medians = np.array([np.median(chunk) for chunk in np.split(lag, boundaries)])
    offsets = np.trunc(medians).astype(np.int64)
    if offsets.size != T:
        raise DimensionError(f"Path covers {offsets.size} reference points, expected {T}")
    return offsets


def warp_onto_reference(path: AlignmentPath, y: SeriesLike, T: int) -> np.ndarray:
    """Put y on the reference clock, averaging values aligned to one point"""
    yv = _values(y)
    k = path.pairs[:, 0]
    totals = np.bincount(k, weights=yv[path.pairs[:, 1]], minlength=T)
    counts = np.bincount(k, minlength=T)
    return totals / counts


def shift_path(T: int, shift: int) -> AlignmentPath:
    """
    Alignment path of a single global shift: x[k] pairs with y[k + shift].

    The overhanging ends are absorbed by horizontal (or vertical) runs so
    the path stays anchored at (0, 0) and (T-1, T-1).
    """
    if abs(shift) > T - 1:
        raise InfeasibleBandError(f"Shift {shift} exceeds series length {T}")
    if shift < 0:
        return shift_path(T, -shift).transposed()
    s = shift
    head = [(0, l) for l in range(s + 1)]
    body = [(k, k + s) for k in range(1, T - s)]
    tail = [(k, T - 1) for k in range(T - s, T)]
    return AlignmentPath(pairs=np.array(head + body + tail, dtype=np.int64), total_cost=0.0)


def shift_candidates(tau_max: int) -> List[int]:
    """0, -1, 1, -2, 2, ... up to tau_max"""
    shifts = [0]
    for s in range(1, tau_max + 1):
        shifts.extend((-s, s))
    return shifts


def shifted_correlation(x: np.ndarray, y: np.ndarray, shift: int) -> float:
    """Pearson correlation of x[k] against y[k + shift] over the overlap"""
    T = x.size
    if shift >= 0:
        a, b = x[:T - shift], y[shift:]
    else:
        a, b = x[-shift:], y[:T + shift]
    if a.size < 2:
        return math.nan
    with np.errstate(invalid='ignore', divide='ignore'):
        return float(np.corrcoef(a, b)[0, 1])


def best_global_shift(x: SeriesLike, y: SeriesLike, tau_max: int) -> int:
    """
    Integer shift in [-tau_max, tau_max] maximizing Pearson correlation.

    Ties go to the smallest |shift|, then to the negative one; undefined
    correlations never win.
    """
    xv = _values(x)
    yv = _values(y)
    if xv.size != yv.size:
        raise DimensionError(f"Cannot shift-align series of lengths {xv.size} and {yv.size}")
    best_shift = 0
    best = -math.inf
    for s in shift_candidates(min(tau_max, xv.size - 1)):
        r = shifted_correlation(xv, yv, s)
        if not math.isnan(r) and r > best:
            best, best_shift = r, s
    return best_shift


def global_shift_align(x: SeriesLike, y: SeriesLike, cfg: DtwConfig = DtwConfig()) -> AlignmentPath:
    """Drop-in replacement for dtw_align that applies one global shift"""
    xv = _values(x)
    cfg.validate(xv.size)
    return shift_path(xv.size, best_global_shift(xv, y, cfg.tau_max))
