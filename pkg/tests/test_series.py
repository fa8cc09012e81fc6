"""
Series normalization, group validation and the series CSV format
"""

import numpy as np
import pytest

from ideaflow.exceptions import DimensionError, EmptyGroupError, FormatError, InvalidInputError, UniquenessError
from ideaflow.models import GroupSeries, TimeSeries, WordSeries
from ideaflow.series import read_series_csv, validate_group_pair, write_series_csv, znormalize


def _group(group, tokens, T=200, seed=0):
    rng = np.random.default_rng(seed)
    return GroupSeries(group, tuple(
        WordSeries(token, group, TimeSeries(rng.poisson(3.0, size=T).astype(float)))
        for token in tokens
    ))


def test_znormalize_uses_population_std():
    """[1, 2, 3] maps to +-sqrt(3/2)"""
    out = znormalize([1.0, 2.0, 3.0]).values

    assert np.allclose(out, [-1.224744871, 0.0, 1.224744871])


def test_znormalize_constant_series():
    """Constant series fall under the variance floor"""
    assert znormalize([5.0, 5.0, 5.0, 5.0]).values.tolist() == [0.0, 0.0, 0.0, 0.0]


def test_znormalize_is_idempotent():
    """Normalizing twice changes nothing"""
    once = znormalize(np.random.default_rng(1).normal(size=50))
    twice = znormalize(once)

    assert np.allclose(once.values, twice.values, atol=1e-12)


def test_time_series_rejects_non_finite():
    """NaN and inf are invalid input"""
    with pytest.raises(InvalidInputError):
        znormalize([1.0, np.nan, 2.0])
    with pytest.raises(InvalidInputError):
        TimeSeries(np.array([1.0, np.inf]))


def test_validate_group_pair_dimensions():
    """Well-formed groups report (N_A, N_B, T)"""
    assert validate_group_pair(_group('A', ['tax', 'vote', 'bill']), _group('B', ['tax', 'debt'])) == (3, 2, 200)


def test_validate_group_pair_length_mismatch():
    """One short series fails the whole pair"""
    a = _group('A', ['tax', 'vote'])
    short = WordSeries('debt', 'B', TimeSeries(np.ones(199)))
    b = GroupSeries('B', (short,) + _group('B', ['tax']).words)

    with pytest.raises(DimensionError):
        validate_group_pair(a, b)


def test_validate_group_pair_duplicate_token():
    """A token may appear once per group"""
    a = _group('A', ['tax', 'vote'])
    a = GroupSeries('A', a.words + (WordSeries('tax', 'A', TimeSeries(np.ones(200))),))

    with pytest.raises(UniquenessError):
        validate_group_pair(a, _group('B', ['tax']))


def test_validate_group_pair_empty_group():
    """An empty group is rejected before any pairing"""
    with pytest.raises(EmptyGroupError):
        validate_group_pair(_group('A', ['tax']), GroupSeries('B', ()))


def test_series_csv_round_trip(tmp_path):
    """Written series read back with tokens, groups and values intact"""
    a = _group('A', ['tax', 'vote'], T=6)
    b = _group('B', ['debt'], T=6, seed=2)
    path = tmp_path / 'series.csv'
    write_series_csv(path, a, b)

    a2, b2 = read_series_csv(path)

    assert path.read_text().splitlines()[0] == 'word,group,t0,t1,t2,t3,t4,t5'
    assert a2.tokens == ['tax', 'vote']
    assert b2.tokens == ['debt']
    assert np.array_equal(a2.matrix(), a.matrix())


def test_series_csv_bad_header(tmp_path):
    """A header that does not read word,group,t0,... is a format error"""
    path = tmp_path / 'series.csv'
    path.write_text('token,group,t0,t1\ntax,A,1,2\n')

    with pytest.raises(FormatError) as info:
        read_series_csv(path)
    assert info.value.line == 1


def test_series_csv_negative_value(tmp_path):
    """Negative counts are rejected with their line number"""
    path = tmp_path / 'series.csv'
    path.write_text('word,group,t0,t1\ntax,A,1,2\ndebt,B,3,-1\n')

    with pytest.raises(FormatError) as info:
        read_series_csv(path)
    assert info.value.line == 3


def test_series_csv_unknown_group(tmp_path):
    """Groups other than A and B are rejected"""
    path = tmp_path / 'series.csv'
    path.write_text('word,group,t0,t1\ntax,C,1,2\n')

    with pytest.raises(FormatError):
        read_series_csv(path)
