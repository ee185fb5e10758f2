"""Per-interval feasible bands: the set of constant densities an interval
admits at a given threshold.

For an interval with empirical mass p the constraint is
``sqrt(2*logLR(q, p)) - penalty(p) <= kappa`` in the hypothesized mass q.
The left side is strictly convex in q with its minimum at q = p, so the
feasible set is a single mass interval whose endpoints are the two roots of
a smooth scalar equation; dividing by the interval width turns it into a
density band.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .intervals import IntervalSpec
from .multiscale import log_likelihood_ratio, penalty
from .sample import SortedSample

#: absolute tolerance of the mass roots
ROOT_TOL = 1e-10
#: relative slack for band membership tests downstream (avoids boundary flapping)
BAND_SLACK = 1e-9


@dataclass(frozen=True)
class FeasibleBand:
    """Feasible constant-density band [lower, upper] of one interval.

    ``empty`` marks an unsatisfiable constraint (kappa below the negated
    penalty); lower/upper are then meaningless and set to +inf/-inf so any
    accidental membership test fails.
    """

    interval: IntervalSpec
    lower: float
    upper: float
    empty: bool = False

    def contains(self, mu: float) -> bool:
        if self.empty:
            return False
        return self.lower * (1.0 - BAND_SLACK) <= mu <= self.upper * (1.0 + BAND_SLACK)


def _gap(q: float, p_hat: float, kappa: float, n: int) -> float:
    return 2.0 * log_likelihood_ratio(p_hat, q, n) - (penalty(p_hat) + kappa) ** 2


def mass_roots(p_hat: float, kappa: float, n: int) -> tuple[float, float]:
    """The two hypothesized-mass roots around p_hat, or (nan, nan) when the
    constraint is unsatisfiable."""
    if kappa <= -penalty(p_hat):
        return (np.nan, np.nan)
    tiny = 1e-300
    lo = brentq(_gap, tiny, p_hat, args=(p_hat, kappa, n), xtol=ROOT_TOL)
    hi = brentq(_gap, p_hat, 1.0 - 1e-16, args=(p_hat, kappa, n), xtol=ROOT_TOL)
    return (float(lo), float(hi))


def mass_roots_batch(p_hat: np.ndarray, kappa: float, n: int, iters: int = 64):
    """Vectorized bisection for the mass roots of many empirical masses.

    Same equation as :func:`mass_roots`; used where one dataset needs bands
    for thousands of intervals at once.  Unsatisfiable entries come back nan.
    """
    p = np.asarray(p_hat, dtype=float)
    root_level = penalty(p) + kappa
    target = root_level**2
    ok = root_level > 0.0

    def solve(side: str) -> np.ndarray:
        if side == "lower":
            a = np.full_like(p, 1e-300)
            b = p.copy()
        else:
            a = p.copy()
            b = np.full_like(p, 1.0 - 1e-16)
        for _ in range(iters):
            mid = 0.5 * (a + b)
            g = 2.0 * log_likelihood_ratio(p, mid, n) - target
            # on the lower side g decreases in q, on the upper side it increases
            high = g > 0.0
            if side == "lower":
                a = np.where(high, mid, a)
                b = np.where(high, b, mid)
            else:
                b = np.where(high, mid, b)
                a = np.where(high, a, mid)
        return 0.5 * (a + b)

    lo = np.where(ok, solve("lower"), np.nan)
    hi = np.where(ok, solve("upper"), np.nan)
    return lo, hi


def constraint_interval(
    interval: IntervalSpec, sample: SortedSample, kappa: float
) -> FeasibleBand:
    """Feasible density band of one interval at threshold ``kappa``.

    The band always contains the interval's own empirical average density;
    an unsatisfiable constraint is returned as an explicit empty marker, not
    an error.
    """
    p_hat = interval.count / sample.n
    q_lo, q_hi = mass_roots(p_hat, kappa, sample.n)
    if np.isnan(q_lo):
        return FeasibleBand(interval, np.inf, -np.inf, empty=True)
    x = sample.values
    width = x[interval.k - 1] - x[interval.j - 1]
    return FeasibleBand(interval, q_lo / width, q_hi / width)


def feasible_bands(sample: SortedSample, kappa: float) -> list[FeasibleBand]:
    """Bands for every interval of the system, in system order."""
    from .intervals import build_interval_system

    return [
        constraint_interval(iv, sample, kappa)
        for iv in build_interval_system(sample.n)
    ]
