"""
Series normalization, group validation and the group series CSV format
"""

import logging
from pathlib import Path
from typing import Tuple, Union, Sequence

import numpy as np
import pandas as pd

from .exceptions import DimensionError, UniquenessError, FormatError, EmptyGroupError
from .models import TimeSeries, WordSeries, GroupSeries, GROUPS

logger = logging.getLogger(__name__)

VARIANCE_FLOOR = 1e-12

PathLike = Union[str, Path]


def znormalize(series: Union[TimeSeries, Sequence[float], np.ndarray]) -> TimeSeries:
    """
    Scale a series to zero mean and unit population variance.

    Constant series (variance below 1e-12) map to all zeros.

    Raises:
        InvalidInputError: if any value is non-finite
    """
    if not isinstance(series, TimeSeries):
        series = TimeSeries(np.asarray(series, dtype=np.float64))
    values = series.values
    mean = values.mean()
    var = values.var()
    if var < VARIANCE_FLOOR:
        return TimeSeries(np.zeros_like(values))
    return TimeSeries((values - mean) / np.sqrt(var))


def validate_group_pair(a: GroupSeries, b: GroupSeries) -> Tuple[int, int, int]:
    """
    Check that two groups can be analyzed together.

    Args:
        a: Group A series
        b: Group B series

    Returns:
        Dimensions (N_A, N_B, T)

    Raises:
        EmptyGroupError: if either group has no words
        DimensionError: if any series length differs from the others
        UniquenessError: if a token repeats within a group
    """
    for group in (a, b):
        if not group.words:
            raise EmptyGroupError(f"Group {group.group} has no words")

    T = a.T
    for group in (a, b):
        seen = set()
        for word in group.words:
            if word.series.T != T:
                raise DimensionError(
                    f"Series '{word.word}' in group {group.group} has {word.series.T} points, expected {T}",
                    suggestion="All series of both groups must share one time axis"
                )
            if word.word in seen:
                raise UniquenessError(f"Duplicate word '{word.word}' in group {group.group}")
            seen.add(word.word)

    return len(a), len(b), T


def read_series_csv(path: PathLike) -> Tuple[GroupSeries, GroupSeries]:
    """
    Read the group series CSV (header `word,group,t0,...,t{T-1}`).

    Raises:
        FormatError: on a malformed header, unknown group or invalid value
    """
    source = str(path)
    try:
        frame = pd.read_csv(path, dtype={'word': str, 'group': str}, keep_default_na=False)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise FormatError(f"Cannot read series CSV: {e}", source=source)

    columns = list(frame.columns)
    expected = ['word', 'group'] + [f"t{k}" for k in range(len(columns) - 2)]
    if columns != expected or len(columns) < 4:
        raise FormatError(
            "Unexpected header",
            details=f"got {columns[:5]}{'...' if len(columns) > 5 else ''}",
            suggestion="Header must read word,group,t0,t1,...",
            source=source,
            line=1
        )

    value_frame = frame[columns[2:]].apply(pd.to_numeric, errors='coerce')
    values = value_frame.to_numpy(dtype=np.float64)
    bad_rows = ~np.all(np.isfinite(values) & (values >= 0), axis=1)
    if bad_rows.any():
        row = int(np.flatnonzero(bad_rows)[0])
        raise FormatError("Values must be non-negative reals", source=source, line=row + 2)

    members = {g: [] for g in GROUPS}
    for row, (word, group) in enumerate(zip(frame['word'], frame['group'])):
        if group not in GROUPS:
            raise FormatError(f"Unknown group '{group}'", source=source, line=row + 2)
        members[group].append(WordSeries(word=word, group=group, series=TimeSeries(values[row])))

    logger.info("Read %d + %d word series of length %d from %s",
                len(members['A']), len(members['B']), values.shape[1], source)
    return GroupSeries('A', tuple(members['A'])), GroupSeries('B', tuple(members['B']))


def write_series_csv(path: PathLike, a: GroupSeries, b: GroupSeries) -> None:
    """Write both groups in the group series CSV format"""
    T = a.T or b.T
    rows = []
    for group in (a, b):
        for word in group.words:
            rows.append([word.word, group.group] + word.series.values.tolist())
    frame = pd.DataFrame(rows, columns=['word', 'group'] + [f"t{k}" for k in range(T)])
    frame.to_csv(path, index=False, float_format='%.15g', lineterminator='\n')
