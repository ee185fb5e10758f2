"""Audit an arbitrary histogram estimator against the multiscale constraint.

Two complementary diagnostics: system intervals inside a constant stretch of
the estimator where the estimator's value fails the local likelihood-ratio
test (features the estimator missed), and change-points whose neighborhoods
could be merged into one feasible block (structure the data do not support).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dp import HistogramModel
from .intervals import IntervalSpec, interval_arrays
from .multiscale import QuantileTable, log_likelihood_ratio, lookup_kappa, penalty
from .sample import SortedSample

#: longest run of adjacent segments considered when counting merges
MERGE_WINDOW = 5


@dataclass(frozen=True)
class AuditReport:
    """Outcome of auditing one estimator on one sample at one level."""

    violations: list[IntervalSpec]
    removable: list[tuple[int, int]]  # (change-point index, merge multiplicity)
    alpha: float
    kappa: float

    @property
    def clean(self) -> bool:
        return not self.violations and not self.removable


def _piece_values(estimator: HistogramModel, lo: np.ndarray, hi: np.ndarray):
    """Constant estimator value on each value interval (lo, hi], or nan when
    the interval straddles a breakpoint.

    Regions outside the estimator's support count as zero-height pieces, so
    an interval beyond the last break is constant at 0.
    """
    breaks = estimator.breaks
    # piece id: -1 left of support, nbins right of support
    id_lo = np.searchsorted(breaks, lo, side="right") - 1
    id_hi = np.searchsorted(breaks, hi, side="left") - 1
    same = id_lo == id_hi
    ext = np.concatenate(([0.0], estimator.heights, [0.0]))
    vals = ext[np.clip(id_lo, -1, estimator.nbins) + 1]
    return np.where(same, vals, np.nan)


def violation_intervals(
    sample: SortedSample,
    estimator: HistogramModel,
    alpha: float,
    table: QuantileTable,
) -> list[IntervalSpec]:
    """System intervals inside one constant piece of the estimator whose
    value the local constraint rejects at level alpha.

    A piece of height c over interval I is rejected when
    sqrt(2*logLR(F_n(I), c*|I|)) - penalty(F_n(I)) > kappa, or outright when
    c*|I| leaves (0, 1) (e.g. zero-height pieces covering sample points).
    """
    n = sample.n
    j, k, scale = interval_arrays(n)
    if j.size == 0:
        return []
    kappa = lookup_kappa(table, alpha, n)
    x = sample.values
    lo, hi = x[j - 1], x[k - 1]
    c = _piece_values(estimator, lo, hi)
    applicable = ~np.isnan(c)
    p_hat = (k - j) / n
    p0 = c * (hi - lo)
    bad = applicable & ((p0 <= 0.0) | (p0 >= 1.0))
    check = applicable & ~bad
    stat = np.full(j.size, -np.inf)
    if check.any():
        stat[check] = np.sqrt(
            2.0 * log_likelihood_ratio(p_hat[check], p0[check], n)
        ) - penalty(p_hat[check])
    viol = bad | (stat > kappa)
    return [
        IntervalSpec(int(a), int(b), int(s))
        for a, b, s in zip(j[viol], k[viol], scale[viol])
    ]


def _merge_admissible(
    sample: SortedSample,
    estimator: HistogramModel,
    first: int,
    last: int,
    kappa: float,
) -> bool:
    """True when segments first..last (inclusive) pooled into one constant
    block satisfy every contained system constraint."""
    n = sample.n
    x = sample.values
    breaks = estimator.breaks
    lo_v, hi_v = breaks[first], breaks[last + 1]
    if estimator.counts is not None:
        count = int(estimator.counts[first : last + 1].sum())
    else:
        count = int(
            np.searchsorted(x, hi_v, side="right") - np.searchsorted(x, lo_v, side="right")
        )
        if first == 0:
            count += int(np.sum(x == lo_v))
    width = hi_v - lo_v
    mu = count / (n * width)
    j, k, _ = interval_arrays(n)
    xl, xr = x[j - 1], x[k - 1]
    inside = (xl >= lo_v) & (xr <= hi_v)
    if not inside.any():
        return True
    p0 = mu * (xr[inside] - xl[inside])
    if np.any((p0 <= 0.0) | (p0 >= 1.0)):
        return False
    p_hat = (k[inside] - j[inside]) / n
    stat = np.sqrt(2.0 * log_likelihood_ratio(p_hat, p0, n)) - penalty(p_hat)
    return bool(np.all(stat <= kappa))


def removable_changepoints(
    sample: SortedSample,
    estimator: HistogramModel,
    alpha: float,
    table: QuantileTable,
    *,
    window: int = MERGE_WINDOW,
) -> list[tuple[int, int]]:
    """Change-points of the estimator that the data do not require.

    A change-point is removable when pooling its two adjacent segments into
    one constant block passes all contained constraints; its multiplicity
    counts every admissible contiguous merge of 2..window segments covering
    it.  Returned as (breakpoint index into estimator.breaks, multiplicity).
    """
    if estimator.nbins < 2:
        return []
    n = sample.n
    j, _, _ = interval_arrays(n)
    if j.size == 0:
        return []
    kappa = lookup_kappa(table, alpha, n)
    nb = estimator.nbins
    admissible = {}
    for first in range(nb):
        for last in range(first + 1, min(first + window, nb)):
            admissible[(first, last)] = _merge_admissible(
                sample, estimator, first, last, kappa
            )
    out = []
    for cp in range(1, nb):  # interior breakpoints
        if not admissible[(cp - 1, cp)]:
            continue
        mult = sum(
            1
            for (first, last), ok in admissible.items()
            if ok and first < cp <= last
        )
        out.append((cp, mult))
    return out


def audit(
    sample: SortedSample,
    estimator: HistogramModel,
    alpha: float,
    table: QuantileTable,
    *,
    window: int = MERGE_WINDOW,
) -> AuditReport:
    """Full audit: violation intervals plus removable change-points."""
    kappa = lookup_kappa(table, alpha, sample.n)
    return AuditReport(
        violations=violation_intervals(sample, estimator, alpha, table),
        removable=removable_changepoints(
            sample, estimator, alpha, table, window=window
        ),
        alpha=alpha,
        kappa=kappa,
    )
