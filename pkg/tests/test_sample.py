import numpy as np
import pytest

from mshist.sample import DuplicateValuesError, SortedSample


def test_sorts_input():
    s = SortedSample([3.0, 1.0, 2.0])
    assert s.values.tolist() == [1.0, 2.0, 3.0]


def test_rejects_small_and_nonfinite():
    with pytest.raises(ValueError):
        SortedSample([1.0])
    with pytest.raises(ValueError):
        SortedSample([1.0, np.nan])
    with pytest.raises(ValueError):
        SortedSample([1.0, np.inf])
    with pytest.raises(ValueError):
        SortedSample([[1.0, 2.0]])


def test_rejects_duplicates_by_default():
    with pytest.raises(DuplicateValuesError):
        SortedSample([1.0, 2.0, 2.0, 3.0])


def test_jitter_separates_ties_deterministically():
    vals = [1.0, 2.0, 2.0, 2.0, 3.0]
    a = SortedSample(vals, jitter=True, seed=1)
    b = SortedSample(vals, jitter=True, seed=1)
    c = SortedSample(vals, jitter=True, seed=2)
    assert np.array_equal(a.values, b.values)
    assert not np.array_equal(a.values, c.values)
    assert np.all(np.diff(a.values) > 0)
    # perturbation stays tiny relative to local spacing
    assert np.max(np.abs(a.values - np.sort(vals))) < 1e-8


def test_order_statistic_one_based():
    s = SortedSample([5.0, 1.0, 3.0])
    assert s.order_statistic(1) == 1.0
    assert s.order_statistic(3) == 5.0
    with pytest.raises(IndexError):
        s.order_statistic(0)
    with pytest.raises(IndexError):
        s.order_statistic(4)


def test_values_immutable():
    s = SortedSample([1.0, 2.0])
    with pytest.raises(ValueError):
        s.values[0] = 0.0


def test_len_and_repr():
    s = SortedSample([1.0, 2.0, 4.0])
    assert len(s) == 3
    assert "n=3" in repr(s)
