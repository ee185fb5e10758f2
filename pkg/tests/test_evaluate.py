import numpy as np
import pytest

from mshist.densities import get_density
from mshist.dp import HistogramModel, essential_histogram
from mshist.evaluate import (
    audit,
    removable_changepoints,
    violation_intervals,
)
from mshist.intervals import build_interval_system
from mshist.multiscale import local_statistic, lookup_kappa
from mshist.sample import SortedSample


def single_bin(sample):
    x = sample.values
    return HistogramModel(
        breaks=np.array([x[0], x[-1]]),
        heights=np.array([1.0 / (x[-1] - x[0])]),
        n=sample.n,
        counts=np.array([sample.n]),
    )


def halves(sample):
    x = sample.values
    n = sample.n
    mid = n // 2
    return HistogramModel(
        breaks=np.array([x[0], x[mid - 1], x[-1]]),
        heights=np.array(
            [mid / (n * (x[mid - 1] - x[0])), (n - mid) / (n * (x[-1] - x[mid - 1]))]
        ),
        n=n,
        counts=np.array([mid, n - mid]),
    )


class TestViolations:
    def test_self_audit_is_clean(self, tables):
        for seed, density in enumerate(["uniform", "claw", "exponential"]):
            sample = get_density(density).sampler(seed, 300)
            fit = essential_histogram(sample, 0.1, tables(300))
            report = audit(sample, fit, 0.1, tables(300))
            assert report.clean

    def test_single_bin_on_bimodal_fails(self, tables):
        sample = get_density("bimodal").sampler(7, 500)
        v = violation_intervals(sample, single_bin(sample), 0.1, tables(500))
        assert v

    def test_flagged_intervals_reverify(self, tables):
        sample = get_density("bimodal").sampler(7, 500)
        est = single_bin(sample)
        kappa = lookup_kappa(tables(500), 0.1, 500)
        mu = float(est.heights[0])
        v = violation_intervals(sample, est, 0.1, tables(500))
        flagged = {(iv.j, iv.k) for iv in v}
        for iv in build_interval_system(500):
            stat = local_statistic(iv, mu, sample)
            assert ((iv.j, iv.k) in flagged) == (stat > kappa)

    def test_zero_height_piece_with_mass_is_flagged(self, tables):
        # estimator support misses the sample's right half entirely
        sample = get_density("uniform").sampler(1, 300)
        x = sample.values
        est = HistogramModel(
            breaks=np.array([x[0], 0.5]),
            heights=np.array([1.0 / (0.5 - x[0])]),
            n=300,
        )
        v = violation_intervals(sample, est, 0.1, tables(300))
        right_tail = [iv for iv in v if x[iv.j - 1] >= 0.5]
        assert right_tail

    def test_monotone_in_alpha(self, tables):
        sample = get_density("bimodal").sampler(3, 500)
        est = single_bin(sample)
        prev = set()
        for alpha in (0.05, 0.1, 0.3, 0.5, 0.9):
            cur = {
                (iv.j, iv.k)
                for iv in violation_intervals(sample, est, alpha, tables(500))
            }
            assert prev <= cur
            prev = cur

    def test_deterministic(self, tables):
        sample = get_density("claw").sampler(5, 300)
        est = halves(sample)
        a = audit(sample, est, 0.1, tables(300))
        b = audit(sample, est, 0.1, tables(300))
        assert a.violations == b.violations and a.removable == b.removable


class TestRemovable:
    def test_uniform_two_bin_changepoint_removable(self, tables):
        sample = get_density("uniform").sampler(2, 500)
        rem = removable_changepoints(sample, halves(sample), 0.1, tables(500))
        assert rem == [(1, 1)]

    def test_single_bin_has_none(self, tables):
        sample = get_density("uniform").sampler(2, 300)
        assert removable_changepoints(sample, single_bin(sample), 0.1, tables(300)) == []

    def test_essential_fit_has_none(self, tables):
        for seed in range(5):
            sample = get_density("claw").sampler(seed, 500)
            fit = essential_histogram(sample, 0.1, tables(500))
            assert removable_changepoints(sample, fit, 0.1, tables(500)) == []

    def test_multiplicity_counts_covering_merges(self, tables):
        # four equal bins on uniform data: every contiguous merge is feasible
        sample = get_density("uniform").sampler(4, 500)
        x = sample.values
        q = [x[0], x[124], x[249], x[374], x[-1]]
        counts = np.array([125, 125, 125, 125])
        est = HistogramModel(
            breaks=np.array(q),
            heights=counts / (500 * np.diff(q)),
            n=500,
            counts=counts,
        )
        rem = removable_changepoints(sample, est, 0.1, tables(500))
        assert [cp for cp, _ in rem] == [1, 2, 3]
        # change-point 2 is covered by merges (1,2),(2,3),(1,3),(0..),...
        mult = dict(rem)
        assert mult[2] >= mult[1] - 1  # central points covered at least as much
        assert all(m >= 1 for m in mult.values())

    def test_window_cap(self, tables):
        sample = get_density("uniform").sampler(4, 500)
        x = sample.values
        q = np.quantile(x, np.linspace(0, 1, 9))
        q[0], q[-1] = x[0], x[-1]
        idx = np.searchsorted(x, q[1:-1])
        q = np.concatenate([[x[0]], x[idx], [x[-1]]])
        counts = np.diff(np.searchsorted(x, q, side="right"))
        counts[0] += 1
        est = HistogramModel(
            breaks=q, heights=counts / (500 * np.diff(q)), n=500, counts=counts
        )
        small = removable_changepoints(sample, est, 0.1, tables(500), window=2)
        large = removable_changepoints(sample, est, 0.1, tables(500), window=5)
        assert dict(small).keys() == dict(large).keys()
        assert all(dict(large)[cp] >= dict(small)[cp] for cp, _ in small)
