"""Reference densities, classical binning rules, and evaluation metrics for
benchmarking histogram estimators."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.stats import norm

from .dp import HistogramModel
from .sample import SortedSample

DEFAULT_P_GRID = (0.01, 0.05, 0.1, 0.25)
#: locations scanned when approximating the standardized interval-mass error
DP_GRID_SIZE = 2048


@dataclass(frozen=True)
class ReferenceDensity:
    """A known density with sampler and the analytic quantities the metrics
    need.  ``true_skewness`` is None when undefined; ``mise_defined`` turns
    the integrated-squared-error metric off for heavy-tailed cases."""

    name: str
    pdf: Callable[[np.ndarray], np.ndarray]
    cdf: Callable[[np.ndarray], np.ndarray]
    sampler: Callable[[int, int], SortedSample]
    true_mode_count: int
    pdf_sq_integral: float
    true_skewness: Optional[float] = None
    mise_defined: bool = True


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


# ---------------------------------------------------------------------------
# gaussian mixtures


def _gm_pdf(w, mu, sd):
    def pdf(x):
        x = np.asarray(x, dtype=float)[..., None]
        return np.sum(w * norm.pdf(x, loc=mu, scale=sd), axis=-1)

    return pdf


def _gm_cdf(w, mu, sd):
    def cdf(x):
        x = np.asarray(x, dtype=float)[..., None]
        return np.sum(w * norm.cdf(x, loc=mu, scale=sd), axis=-1)

    return cdf


def _gm_sampler(w, mu, sd):
    w = np.asarray(w)
    mu = np.asarray(mu)
    sd = np.asarray(sd)

    def sampler(seed: int, n: int) -> SortedSample:
        rng = _rng(seed)
        comp = rng.choice(w.size, size=n, p=w)
        return SortedSample(rng.normal(mu[comp], sd[comp]))

    return sampler


def _gm_pdf_sq_integral(w, mu, sd) -> float:
    # int (sum_i w_i phi_i)^2 = sum_ij w_i w_j N(mu_i - mu_j | 0, sd_i^2 + sd_j^2)
    w = np.asarray(w)
    mu = np.asarray(mu)
    var = np.asarray(sd) ** 2
    d = mu[:, None] - mu[None, :]
    v = var[:, None] + var[None, :]
    return float(np.sum(w[:, None] * w[None, :] * norm.pdf(d, scale=np.sqrt(v))))


def _gm_skewness(w, mu, sd) -> float:
    w = np.asarray(w)
    mu = np.asarray(mu)
    var = np.asarray(sd) ** 2
    m1 = np.sum(w * mu)
    m2 = np.sum(w * (mu**2 + var))
    m3 = np.sum(w * (mu**3 + 3 * mu * var))
    v = m2 - m1**2
    return float((m3 - 3 * m1 * v - m1**3) / v**1.5)


def _gaussian_mixture(name, w, mu, sd, modes) -> ReferenceDensity:
    return ReferenceDensity(
        name=name,
        pdf=_gm_pdf(w, mu, sd),
        cdf=_gm_cdf(w, mu, sd),
        sampler=_gm_sampler(w, mu, sd),
        true_mode_count=modes,
        pdf_sq_integral=_gm_pdf_sq_integral(w, mu, sd),
        true_skewness=_gm_skewness(w, mu, sd),
    )


# ---------------------------------------------------------------------------
# piecewise-constant densities


def _piecewise(name, breaks, heights, modes) -> ReferenceDensity:
    model = HistogramModel(
        breaks=np.asarray(breaks, dtype=float),
        heights=np.asarray(heights, dtype=float),
        n=2,
    )
    m1, m2, m3 = (_hist_raw_moment(model, r) for r in (1, 2, 3))
    v = m2 - m1**2
    skew = (m3 - 3 * m1 * v - m1**3) / v**1.5

    def sampler(seed: int, n: int) -> SortedSample:
        rng = _rng(seed)
        w = np.diff(model.breaks) * model.heights
        comp = rng.choice(w.size, size=n, p=w / w.sum())
        lo = model.breaks[comp]
        hi = model.breaks[comp + 1]
        return SortedSample(rng.uniform(lo, hi))

    return ReferenceDensity(
        name=name,
        pdf=model.pdf,
        cdf=model.cdf,
        sampler=sampler,
        true_mode_count=modes,
        pdf_sq_integral=float(np.sum(model.heights**2 * np.diff(model.breaks))),
        true_skewness=float(skew),
    )


def _uniform() -> ReferenceDensity:
    def sampler(seed: int, n: int) -> SortedSample:
        return SortedSample(_rng(seed).random(n))

    return ReferenceDensity(
        name="uniform",
        pdf=lambda x: np.where((np.asarray(x) >= 0) & (np.asarray(x) <= 1), 1.0, 0.0),
        cdf=lambda x: np.clip(np.asarray(x, dtype=float), 0.0, 1.0),
        sampler=sampler,
        true_mode_count=1,
        pdf_sq_integral=1.0,
        true_skewness=0.0,
    )


def _exponential() -> ReferenceDensity:
    def sampler(seed: int, n: int) -> SortedSample:
        return SortedSample(_rng(seed).exponential(size=n))

    x_arr = lambda x: np.asarray(x, dtype=float)
    return ReferenceDensity(
        name="exponential",
        pdf=lambda x: np.where(x_arr(x) >= 0, np.exp(-np.maximum(x_arr(x), 0.0)), 0.0),
        cdf=lambda x: np.where(x_arr(x) >= 0, -np.expm1(-np.maximum(x_arr(x), 0.0)), 0.0),
        sampler=sampler,
        true_mode_count=1,
        pdf_sq_integral=0.5,
        true_skewness=2.0,
    )


def _cauchy() -> ReferenceDensity:
    def sampler(seed: int, n: int) -> SortedSample:
        return SortedSample(_rng(seed).standard_cauchy(n))

    x_arr = lambda x: np.asarray(x, dtype=float)
    return ReferenceDensity(
        name="cauchy",
        pdf=lambda x: 1.0 / (np.pi * (1.0 + x_arr(x) ** 2)),
        cdf=lambda x: 0.5 + np.arctan(x_arr(x)) / np.pi,
        sampler=sampler,
        true_mode_count=1,
        pdf_sq_integral=1.0 / (2.0 * np.pi),
        true_skewness=None,
        mise_defined=False,
    )


def catalog() -> list:
    """All built-in reference densities."""
    claw_w = [0.5] + [0.1] * 5
    claw_mu = [0.0] + [l / 2.0 - 1.0 for l in range(5)]
    claw_sd = [1.0] + [0.1] * 5
    harp = ([0.2] * 5, [0.0, 5.0, 15.0, 30.0, 60.0], [0.5, 1.0, 2.0, 4.0, 8.0])
    return [
        _uniform(),
        _exponential(),
        _piecewise(
            "histogram_mixture",
            [0.0, 0.75, 1.25, 2.0, 2.975, 3.025, 4.0, 6.0],
            [0.125, 0.375, 0.125, 0.0, 2.5, 0.0, 0.25],
            modes=3,
        ),
        _gaussian_mixture("claw", claw_w, claw_mu, claw_sd, modes=5),
        _gaussian_mixture("harp", *harp, modes=5),
        _cauchy(),
        _gaussian_mixture("bimodal", [0.5, 0.5], [-3.0, 3.0], [1.0, 1.0], modes=2),
        _piecewise("step", [0.0, 0.5, 1.0], [1.5, 0.5], modes=1),
    ]


def get_density(name: str) -> ReferenceDensity:
    for d in catalog():
        if d.name == name:
            return d
    raise KeyError(f"unknown density {name!r}; known: {[d.name for d in catalog()]}")


# ---------------------------------------------------------------------------
# classical binning rules

SCOTT_CONSTANT = 3.49

CLASSICAL_RULES = ("sturges", "scott_width", "scott_area")


def _from_breaks(sample: SortedSample, breaks: np.ndarray) -> HistogramModel:
    """Histogram on given breaks; empty and equal-height neighbors merged."""
    x = sample.values
    n = sample.n
    breaks = np.unique(np.asarray(breaks, dtype=float))
    if breaks.size < 2:
        breaks = np.array([x[0], x[-1]])
    idx = np.clip(np.searchsorted(breaks, x, side="left") - 1, 0, breaks.size - 2)
    counts = np.bincount(idx, minlength=breaks.size - 1)
    # merge runs of adjacent empty bins into one empty bin
    keep = np.concatenate(([True], (counts[1:] != 0) | (counts[:-1] != 0)))
    starts = np.flatnonzero(keep)
    m_breaks = np.append(breaks[starts], breaks[-1])
    m_counts = np.add.reduceat(counts, starts)
    m_heights = m_counts / (n * np.diff(m_breaks))
    return HistogramModel(
        breaks=m_breaks, heights=m_heights, n=n, counts=m_counts.astype(np.int64)
    )


def classical_histogram(sample: SortedSample, rule: str) -> HistogramModel:
    """Equal-width or equal-count histogram by a textbook rule.

    sturges: ceil(log2 n) + 1 equal-width bins; scott_width: equal-width bins
    of width 3.49 * s * n^(-1/3); scott_area: the same number of bins placed
    at empirical quantiles.  Empty bins are merged with their neighbors.
    """
    x = sample.values
    n = sample.n
    span = x[-1] - x[0]
    if rule == "sturges":
        k = math.ceil(math.log2(n)) + 1
        breaks = np.linspace(x[0], x[-1], k + 1)
    elif rule in ("scott_width", "scott_area"):
        s = float(np.std(x, ddof=1))
        if s == 0.0:
            return _from_breaks(sample, np.array([x[0], x[-1]]))
        h = SCOTT_CONSTANT * s * n ** (-1.0 / 3.0)
        k = max(1, math.ceil(span / h))
        if rule == "scott_width":
            breaks = np.linspace(x[0], x[-1], k + 1)
        else:
            breaks = np.quantile(x, np.linspace(0.0, 1.0, k + 1))
    else:
        raise ValueError(f"unknown rule {rule!r}; use one of {CLASSICAL_RULES}")
    return _from_breaks(sample, breaks)


# ---------------------------------------------------------------------------
# metrics


@dataclass(frozen=True)
class MetricSet:
    """Evaluation metrics of one fitted histogram against a known density."""

    mise_component: float  # nan when mise_defined is False
    mise_defined: bool
    kolmogorov: float
    skewness: float
    modes: int
    troughs: int
    n_bins: int
    d_p: Dict[float, float]


def _hist_raw_moment(fit: HistogramModel, r: int) -> float:
    b = fit.breaks
    return float(np.sum(fit.heights * (b[1:] ** (r + 1) - b[:-1] ** (r + 1)) / (r + 1)))


def histogram_skewness(fit: HistogramModel) -> float:
    m1, m2, m3 = (_hist_raw_moment(fit, r) for r in (1, 2, 3))
    v = m2 - m1**2
    if v <= 0:
        return 0.0
    return (m3 - 3.0 * m1 * v - m1**3) / v**1.5


def count_extrema(heights: np.ndarray) -> tuple[int, int]:
    """(modes, troughs) of a piecewise-constant density with zero height
    outside its support."""
    h = np.concatenate(([0.0], np.asarray(heights, dtype=float), [0.0]))
    modes = int(np.sum((h[1:-1] > h[:-2]) & (h[1:-1] > h[2:])))
    troughs = int(np.sum((h[1:-1] < h[:-2]) & (h[1:-1] < h[2:])))
    return modes, troughs


def _quantile_grid(truth: ReferenceDensity, size: int = 4096):
    """Monotone (x, F(x)) grid covering all but 1e-7 of the truth's mass,
    equally spaced in mass so heavy tails stay resolved."""
    lo = brentq(lambda v: float(truth.cdf(v)) - 1e-7, -1e12, 1e12)
    hi = brentq(lambda v: float(truth.cdf(v)) - (1.0 - 1e-7), -1e12, 1e12)
    u = np.linspace(1e-7, 1.0 - 1e-7, size)
    a = np.full(size, lo)
    b = np.full(size, hi)
    for _ in range(60):
        mid = 0.5 * (a + b)
        high = np.asarray(truth.cdf(mid), dtype=float) > u
        b = np.where(high, mid, b)
        a = np.where(high, a, mid)
    x = 0.5 * (a + b)
    F = np.asarray(truth.cdf(x), dtype=float)
    return x, F


def standardized_mass_error(
    fit: HistogramModel, truth: ReferenceDensity, p: float, grid=None
) -> float:
    """sup over intervals of truth-mass p of |fit mass - p| / sqrt(p(1-p)),
    approximated on a fine quantile grid."""
    if grid is None:
        grid = _quantile_grid(truth)
    xg, Fg = grid
    u = np.linspace(Fg[0], Fg[-1] - p, DP_GRID_SIZE)
    left = np.interp(u, Fg, xg)
    right = np.interp(u + p, Fg, xg)
    mass = fit.cdf(right) - fit.cdf(left)
    return float(np.max(np.abs(mass - p)) / math.sqrt(p * (1.0 - p)))


def metrics(
    fit: HistogramModel,
    truth: ReferenceDensity,
    p_grid: Sequence[float] = DEFAULT_P_GRID,
) -> MetricSet:
    """Evaluate one fit against the truth: integrated squared error,
    sup-CDF distance, shape statistics, and standardized interval-mass
    errors on a grid of masses."""
    b = fit.breaks
    w = np.diff(b)
    F = np.asarray(truth.cdf(b), dtype=float)
    if truth.mise_defined:
        mise = float(
            truth.pdf_sq_integral
            - 2.0 * np.sum(fit.heights * np.diff(F))
            + np.sum(fit.heights**2 * w)
        )
    else:
        mise = float("nan")
    # sup |F - H| over breakpoints and a dense grid inside the support
    xs = np.concatenate([b] + [np.linspace(b[0], b[-1], 4096)])
    ks = float(np.max(np.abs(np.asarray(truth.cdf(xs)) - fit.cdf(xs))))
    ks = max(ks, float(F[0]), float(1.0 - F[-1]))
    modes, troughs = count_extrema(fit.heights)
    grid = _quantile_grid(truth)
    d_p = {
        float(p): standardized_mass_error(fit, truth, float(p), grid) for p in p_grid
    }
    return MetricSet(
        mise_component=mise,
        mise_defined=truth.mise_defined,
        kolmogorov=ks,
        skewness=float(histogram_skewness(fit)),
        modes=modes,
        troughs=troughs,
        n_bins=fit.nbins,
        d_p=d_p,
    )


def proposition1_check(k_n: int) -> tuple[float, float]:
    """Deterministic lower-bound check for the population equal-width
    histogram of the two-level step density on [0, 1].

    For odd k_n the bin straddling 1/2 averages the two density levels; the
    interval of truth-mass p = 1/(4 k_n) just right of 1/2 then shows a
    standardized mass error of at least sqrt(p/(1-p)) > p-free bound
    0.5*sqrt(p).  Returns (lhs, rhs) with lhs >= rhs always.
    """
    if k_n < 3 or k_n % 2 == 0:
        raise ValueError("k_n must be odd and >= 3")
    truth = get_density("step")
    breaks = np.linspace(0.0, 1.0, k_n + 1)
    mass = np.diff(np.asarray(truth.cdf(breaks), dtype=float))
    model = HistogramModel(breaks=breaks, heights=mass * k_n, n=2)
    p = 1.0 / (4.0 * k_n)
    # truth-mass p immediately right of the jump at 1/2: width 2p there
    left, right = 0.5, 0.5 + 2.0 * p
    h_mass = float(model.cdf(right) - model.cdf(left))
    lhs = abs(h_mass - p) / math.sqrt(p * (1.0 - p))
    rhs = 0.5 * math.sqrt(p)
    return lhs, rhs


# ---------------------------------------------------------------------------
# benchmark harness

BENCHMARK_COLUMNS = (
    "density",
    "method",
    "alpha",
    "n",
    "rep",
    "n_bins",
    "modes",
    "troughs",
    "mise_sq",
    "kolmogorov",
    "skewness",
    "runtime_ms",
)


def benchmark_rows(
    density: ReferenceDensity,
    n: int,
    reps: int,
    methods: Sequence[str],
    alphas: Sequence[float],
    seed: int,
    table=None,
) -> list:
    """Replicated fits of each method on fresh samples; one dict per
    (rep, method, alpha) combination, CSV-ready.

    ``table`` (a calibrated quantile table) is required when "essential" is
    among the methods; classical rules ignore alpha (recorded as nan).
    """
    from .dp import essential_histogram

    rows = []
    for rep in range(reps):
        ss = np.random.SeedSequence(entropy=seed, spawn_key=(rep,))
        rep_seed = int(ss.generate_state(1)[0])
        sample = density.sampler(rep_seed, n)
        for method in methods:
            if method == "essential":
                if table is None:
                    raise ValueError("essential method needs a quantile table")
                jobs = [(a, lambda a=a: essential_histogram(sample, a, table)) for a in alphas]
            elif method in CLASSICAL_RULES:
                jobs = [(float("nan"), lambda: classical_histogram(sample, method))]
            else:
                raise ValueError(f"unknown method {method!r}")
            for alpha, fitter in jobs:
                t0 = time.perf_counter()
                fit = fitter()
                dt = (time.perf_counter() - t0) * 1000.0
                m = metrics(fit, density)
                rows.append(
                    {
                        "density": density.name,
                        "method": method,
                        "alpha": alpha,
                        "n": n,
                        "rep": rep,
                        "n_bins": m.n_bins,
                        "modes": m.modes,
                        "troughs": m.troughs,
                        "mise_sq": m.mise_component,
                        "kolmogorov": m.kolmogorov,
                        "skewness": m.skewness,
                        "runtime_ms": dt,
                    }
                )
    return rows
