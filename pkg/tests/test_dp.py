import math

import numpy as np
import pytest

from mshist.bounds import feasible_bands
from mshist.dp import (
    HistogramModel,
    brute_force_histogram,
    essential_histogram,
    segment_cost,
)
from mshist.multiscale import QuantileTable, lookup_kappa
from mshist.sample import SortedSample

ALPHAS = (0.05, 0.1, 0.3, 0.5, 0.9)


def synthetic_table(n, kappas=(2.0, 1.6, 1.0, 0.6, 0.1)):
    return QuantileTable(n=n, alphas=ALPHAS, kappas=kappas, reps=100, seed=0)


class TestHistogramModel:
    def test_validation(self):
        with pytest.raises(ValueError):
            HistogramModel(np.array([0.0, 1.0]), np.array([0.5]), 10)  # mass 0.5
        with pytest.raises(ValueError):
            HistogramModel(np.array([1.0, 0.0]), np.array([1.0]), 10)
        with pytest.raises(ValueError):
            HistogramModel(np.array([0.0, 1.0]), np.array([-1.0]), 10)

    def test_pdf_cdf(self):
        m = HistogramModel(np.array([0.0, 1.0, 3.0]), np.array([0.5, 0.25]), 10)
        assert m.pdf([-0.1, 0.0, 0.5, 1.0, 2.0, 3.0, 3.1]).tolist() == [
            0.0, 0.5, 0.5, 0.5, 0.25, 0.25, 0.0,
        ]
        assert m.cdf([-1.0, 0.0, 1.0, 2.0, 3.0, 4.0]).tolist() == [
            0.0, 0.0, 0.5, 0.75, 1.0, 1.0,
        ]

    def test_roundtrip(self):
        m = HistogramModel(
            np.array([0.0, 1.0, 3.0]), np.array([0.5, 0.25]), 10,
            counts=np.array([5, 5]),
        )
        assert HistogramModel.from_dict(m.to_dict()) == m


class TestSegmentCost:
    def test_degenerate_first_block_is_infeasible(self):
        sample = SortedSample(np.linspace(0.0, 1.0, 16))
        assert segment_cost(0, 1, sample, []) == math.inf

    def test_cost_formula_without_constraints(self):
        sample = SortedSample(np.linspace(0.0, 2.0, 16))
        x = sample.values
        got = segment_cost(3, 9, sample, [])
        mu = 6 / (16 * (x[8] - x[2]))
        assert got == pytest.approx(-6 * math.log(mu), rel=1e-12)

    def test_infinite_when_band_violated(self):
        rng = np.random.default_rng(0)
        sample = SortedSample(rng.random(16))
        bands = feasible_bands(sample, -0.5)  # harsh threshold
        costs = [segment_cost(0, 16, sample, bands)]
        assert math.inf in costs or np.isfinite(costs[0])
        # with an empty band everything containing it is infeasible
        from mshist.bounds import FeasibleBand
        from mshist.intervals import IntervalSpec

        dead = FeasibleBand(IntervalSpec(2, 8, 2), math.inf, -math.inf, empty=True)
        assert segment_cost(0, 16, sample, [dead]) == math.inf
        assert segment_cost(8, 16, sample, [dead]) < math.inf

    def test_bad_indices(self):
        sample = SortedSample(np.linspace(0.0, 1.0, 16))
        for j, i in [(-1, 5), (5, 5), (5, 17)]:
            with pytest.raises(ValueError):
                segment_cost(j, i, sample, [])


class TestEssentialHistogram:
    def test_single_bin_below_system_threshold(self):
        sample = SortedSample([0.1, 0.4, 0.5, 0.9])
        fit = essential_histogram(sample, 0.1, synthetic_table(4))
        assert fit.nbins == 1
        assert fit.breaks.tolist() == [0.1, 0.9]
        assert fit.heights[0] == pytest.approx(1.0 / 0.8)

    def test_density_integrates_to_one(self, tables):
        rng = np.random.default_rng(5)
        sample = SortedSample(rng.exponential(size=200))
        fit = essential_histogram(sample, 0.1, tables(200))
        assert float(np.sum(fit.heights * np.diff(fit.breaks))) == pytest.approx(1.0)
        assert int(fit.counts.sum()) == 200

    def test_breaks_are_order_statistics(self, tables):
        rng = np.random.default_rng(6)
        sample = SortedSample(rng.random(300))
        fit = essential_histogram(sample, 0.1, tables(300))
        assert set(fit.breaks).issubset(set(sample.values))
        assert fit.breaks[0] == sample.values[0]
        assert fit.breaks[-1] == sample.values[-1]

    def test_no_adjacent_equal_heights(self, tables):
        from mshist.densities import get_density

        sample = get_density("bimodal").sampler(3, 500)
        fit = essential_histogram(sample, 0.1, tables(500))
        assert np.all(np.diff(fit.heights) != 0.0)

    def test_alpha_monotone_bins(self, tables):
        from mshist.densities import get_density

        for seed in range(5):
            sample = get_density("claw").sampler(seed, 500)
            bins = [
                essential_histogram(sample, a, tables(500)).nbins for a in ALPHAS
            ]
            assert bins == sorted(bins)

    def test_pruned_equals_unpruned(self, tables):
        from mshist.densities import get_density

        for seed in range(10):
            sample = get_density("exponential").sampler(seed, 150)
            a = essential_histogram(sample, 0.1, tables(150), pruned=True)
            b = essential_histogram(sample, 0.1, tables(150), pruned=False)
            assert a.cut_indices == b.cut_indices
            assert np.array_equal(a.breaks, b.breaks)
            assert np.array_equal(a.heights, b.heights)

    def test_affine_equivariance(self, tables):
        rng = np.random.default_rng(9)
        x = rng.exponential(size=100)
        f1 = essential_histogram(SortedSample(x), 0.1, tables(100))
        f2 = essential_histogram(SortedSample(2 * x + 3), 0.1, tables(100))
        assert f1.cut_indices == f2.cut_indices


class TestBruteForce:
    def test_guard(self):
        sample = SortedSample(np.linspace(0.0, 1.0, 17))
        with pytest.raises(ValueError):
            brute_force_histogram(sample, 0.1, synthetic_table(17))

    def test_matches_dp(self, tables):
        from mshist.densities import get_density

        for seed in range(15):
            n = 9 + seed % 6
            sample = get_density("uniform").sampler(seed, n)
            a = essential_histogram(sample, 0.1, tables(n))
            b = brute_force_histogram(sample, 0.1, tables(n))
            assert a.nbins == b.nbins
            assert np.array_equal(a.breaks, b.breaks)
            assert np.array_equal(a.heights, b.heights)

    def test_fit_satisfies_every_band(self, tables):
        rng = np.random.default_rng(12)
        sample = SortedSample(rng.random(14))
        fit = brute_force_histogram(sample, 0.3, tables(14))
        kappa = lookup_kappa(tables(14), 0.3, 14)
        bands = feasible_bands(sample, kappa)
        cuts = fit.cut_indices
        for a, b in zip(cuts, cuts[1:]):
            assert segment_cost(a, b, sample, bands) < math.inf
