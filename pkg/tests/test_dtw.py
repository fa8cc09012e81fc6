"""
Banded DTW against exhaustive path enumeration, offsets and global shifts
"""

import numpy as np
import pytest

from ideaflow.config import DtwConfig
from ideaflow.dtw import (
    best_global_shift,
    dtw_align,
    dtw_costs,
    global_shift_align,
    offsets_from_path,
    path_cost,
    shift_candidates,
    shift_path,
    warp_onto_reference
)
from ideaflow.exceptions import ConfigurationError, DimensionError
from ideaflow.models import AlignmentPath


def _all_paths(T, tau):
    """Every monotone band-respecting path from (0, 0) to (T-1, T-1)"""
    def extend(path):
        k, l = path[-1]
        if (k, l) == (T - 1, T - 1):
            yield list(path)
            return
        for dk, dl in ((1, 1), (1, 0), (0, 1)):
            nk, nl = k + dk, l + dl
            if nk < T and nl < T and abs(nl - nk) <= tau:
                path.append((nk, nl))
                yield from extend(path)
                path.pop()
    yield from extend([(0, 0)])


def _brute_force(x, y, tau):
    best_cost, best_path = np.inf, None
    for path in _all_paths(len(x), tau):
        cost = sum((x[k] - y[l]) ** 2 for k, l in path)
        if cost < best_cost:
            best_cost, best_path = cost, path
    return best_cost, best_path


def _assert_valid(path, T, tau):
    pairs = path.pairs
    assert tuple(pairs[0]) == (0, 0)
    assert tuple(pairs[-1]) == (T - 1, T - 1)
    steps = np.diff(pairs, axis=0)
    assert np.all(steps >= 0)
    assert np.all(steps.sum(axis=1) >= 1)
    assert np.all(steps <= 1)
    assert np.all(np.abs(pairs[:, 1] - pairs[:, 0]) <= tau)


@pytest.mark.parametrize('T,tau', [(4, 1), (5, 2), (6, 2), (7, 3), (7, 6)])
def test_dtw_matches_exhaustive_enumeration(T, tau):
    """Cost and path equal the best of all admissible paths"""
    rng = np.random.default_rng(T * 10 + tau)
    for _ in range(5):
        x = rng.normal(size=T)
        y = rng.normal(size=T)
        path = dtw_align(x, y, DtwConfig(tau_max=tau))
        cost, best = _brute_force(x, y, tau)

        _assert_valid(path, T, tau)
        assert path.total_cost == pytest.approx(cost, abs=1e-12)
        assert [tuple(p) for p in path.pairs.tolist()] == best


@pytest.mark.parametrize('T,tau', [(8, 0), (12, 2), (30, 6)])
def test_batched_costs_equal_pairwise_alignment(T, tau):
    """Vectorised costs are bit-identical to one dtw_align per pair"""
    rng = np.random.default_rng(T + tau)
    x = rng.normal(size=T)
    ys = rng.normal(size=(6, T))
    costs = dtw_costs(x, ys, DtwConfig(tau_max=tau))
    expected = [dtw_align(x, y, DtwConfig(tau_max=tau)).total_cost for y in ys]

    assert costs.tolist() == expected
    assert dtw_costs(x, [ys[0]], DtwConfig(tau_max=tau)).tolist() == expected[:1]


def test_batched_costs_reject_length_mismatch():
    """Every candidate must match the reference length"""
    with pytest.raises(DimensionError):
        dtw_costs(np.arange(8.0), np.zeros((2, 9)))


def test_identical_series_give_diagonal():
    """x aligned with itself costs nothing and has no offsets"""
    x = np.random.default_rng(0).normal(size=20)
    path = dtw_align(x, x, DtwConfig(tau_max=6))

    assert path.total_cost == 0.0
    assert np.array_equal(path.pairs[:, 0], path.pairs[:, 1])
    assert offsets_from_path(path, 20).tolist() == [0] * 20


def test_zero_band_forces_diagonal():
    """tau_max = 0 leaves only the diagonal"""
    rng = np.random.default_rng(3)
    path = dtw_align(rng.normal(size=8), rng.normal(size=8), DtwConfig(tau_max=0))

    assert path.pairs.tolist() == [[k, k] for k in range(8)]


def test_single_spike_offset():
    """A spike one step later in y gives an offset of +1 at the spike"""
    x = [0, 0, 1, 0, 0, 0]
    y = [0, 0, 0, 1, 0, 0]
    path = dtw_align(x, y, DtwConfig(tau_max=2))

    assert path.total_cost == 0.0
    assert [2, 3] in path.pairs.tolist()
    assert offsets_from_path(path, 6)[2] == 1


def test_offsets_use_truncated_median():
    """A point aligned to l = k and l = k + 1 has offset 0"""
    path = AlignmentPath(pairs=[(0, 0), (1, 1), (2, 2), (2, 3), (3, 3)], total_cost=0.0)

    assert offsets_from_path(path, 4).tolist() == [0, 0, 0, 0]
    lagging = AlignmentPath(pairs=[(0, 0), (0, 1), (0, 2), (1, 3), (2, 3), (3, 3)], total_cost=0.0)
    assert offsets_from_path(lagging, 4).tolist() == [1, 2, 1, 0]


def test_swapping_arguments_mirrors_the_path():
    """Cost is symmetric and offsets flip sign"""
    rng = np.random.default_rng(11)
    for _ in range(5):
        x = rng.normal(size=15)
        y = rng.normal(size=15)
        forward = dtw_align(x, y, DtwConfig(tau_max=3))
        backward = dtw_align(y, x, DtwConfig(tau_max=3))

        assert forward.total_cost == pytest.approx(backward.total_cost, abs=1e-9)
        assert path_cost(y, x, forward.transposed()) == pytest.approx(backward.total_cost, abs=1e-9)


def test_wider_band_never_costs_more():
    """Feasible path sets are nested in tau_max"""
    rng = np.random.default_rng(5)
    x = rng.normal(size=30)
    y = rng.normal(size=30)
    costs = [dtw_align(x, y, DtwConfig(tau_max=tau)).total_cost for tau in range(8)]

    assert all(b <= a + 1e-12 for a, b in zip(costs, costs[1:]))


def test_dtw_rejects_bad_input():
    """Length mismatch and oversized bands are errors"""
    with pytest.raises(DimensionError):
        dtw_align(np.zeros(5), np.zeros(6))
    with pytest.raises(ConfigurationError):
        dtw_align(np.zeros(5), np.zeros(5), DtwConfig(tau_max=5))


def test_warp_onto_reference_averages_duplicates():
    """Values aligned to one reference point are averaged"""
    path = AlignmentPath(pairs=[(0, 0), (0, 1), (1, 2), (2, 3), (3, 3)], total_cost=0.0)

    assert warp_onto_reference(path, [2.0, 4.0, 5.0, 7.0], 4).tolist() == [3.0, 5.0, 7.0, 7.0]


def test_shift_candidates_order():
    """Smaller shifts first, negative before positive"""
    assert shift_candidates(2) == [0, -1, 1, -2, 2]


def test_best_global_shift_recovers_planted_lag():
    """y trailing x by three points is found at shift +3"""
    rng = np.random.default_rng(2)
    x = rng.normal(size=60)
    y = np.concatenate([rng.normal(size=3), x[:-3]])

    assert best_global_shift(x, y, 6) == 3
    assert best_global_shift(y, x, 6) == -3


def test_shift_path_is_anchored():
    """Shift paths run from (0, 0) to (T-1, T-1) and pair x[k] with y[k + s]"""
    for shift in (-3, 0, 2):
        path = shift_path(10, shift)
        _assert_valid(path, 10, abs(shift))
        assert [4, 4 + shift] in path.pairs.tolist()


def test_global_shift_align_offsets():
    """Interior offsets of a shift path equal the shift"""
    rng = np.random.default_rng(4)
    x = rng.normal(size=40)
    y = np.concatenate([rng.normal(size=2), x[:-2]])
    offsets = offsets_from_path(global_shift_align(x, y, DtwConfig(tau_max=4)), 40)

    assert np.all(offsets[1:38] == 2)
