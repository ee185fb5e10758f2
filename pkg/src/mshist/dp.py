"""Fewest-bins histogram under the multiscale constraint via a pruned
dynamic program over the order statistics.

Blocks are index ranges (j, i] of order statistics.  The virtual node j = 0
denotes the left edge at X_(1): block (0, i] spans [X_(1), X_(i)] with count
i and width X_(i) - X_(1); every other block (j, i] has count i - j and
width X_(i) - X_(j).  A block is feasible when its average density lies in
the feasible band of every system interval it contains; its cost is the
negative log-likelihood contribution -count*log(count / (n*width)), so among
all segmentations with minimal block count the solver returns the one of
maximal likelihood.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .bounds import BAND_SLACK, FeasibleBand, mass_roots_batch
from .intervals import interval_arrays
from .multiscale import QuantileTable, lookup_kappa
from .sample import SortedSample

#: relative tolerance for merging equal-height neighbor bins
MERGE_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class HistogramModel:
    """Histogram density: ascending breakpoints and per-bin heights.

    The first bin is closed on the left, all bins are right-closed.  Heights
    integrate to one; adjacent heights differ (equal-height neighbors are
    merged at construction when counts are available).
    """

    breaks: np.ndarray
    heights: np.ndarray
    n: int
    counts: np.ndarray | None = None
    cut_indices: tuple[int, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        breaks = np.asarray(self.breaks, dtype=float)
        heights = np.asarray(self.heights, dtype=float)
        if breaks.ndim != 1 or breaks.size < 2 or np.any(np.diff(breaks) <= 0):
            raise ValueError("breaks must be strictly increasing, length >= 2")
        if heights.size != breaks.size - 1 or np.any(heights < 0):
            raise ValueError("need one nonnegative height per bin")
        total = float(np.sum(heights * np.diff(breaks)))
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"density must integrate to 1, got {total!r}")
        counts = self.counts
        if counts is not None:
            counts = np.asarray(counts, dtype=np.int64)
            if counts.size != heights.size:
                raise ValueError("counts must match bins")
        for a in (breaks, heights):
            a.flags.writeable = False
        object.__setattr__(self, "breaks", breaks)
        object.__setattr__(self, "heights", heights)
        object.__setattr__(self, "counts", counts)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HistogramModel):
            return NotImplemented
        counts_equal = (self.counts is None) == (other.counts is None) and (
            self.counts is None or np.array_equal(self.counts, other.counts)
        )
        return (
            self.n == other.n
            and np.array_equal(self.breaks, other.breaks)
            and np.array_equal(self.heights, other.heights)
            and counts_equal
        )

    @property
    def nbins(self) -> int:
        return self.heights.size

    def pdf(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(self.breaks, x, side="left") - 1
        idx = np.where(x == self.breaks[0], 0, idx)
        inside = (idx >= 0) & (idx < self.nbins) & (x <= self.breaks[-1])
        return np.where(inside, self.heights[np.clip(idx, 0, self.nbins - 1)], 0.0)

    def cdf(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        cum = np.concatenate(([0.0], np.cumsum(self.heights * np.diff(self.breaks))))
        idx = np.clip(np.searchsorted(self.breaks, x, side="right") - 1, 0, self.nbins)
        left = self.breaks[np.minimum(idx, self.nbins)]
        h = np.where(idx < self.nbins, self.heights[np.minimum(idx, self.nbins - 1)], 0.0)
        val = cum[np.minimum(idx, self.nbins)] + h * np.maximum(x - left, 0.0)
        val = np.where(x < self.breaks[0], 0.0, val)
        return np.minimum(val, 1.0)

    def to_dict(self) -> dict:
        d = {
            "n": self.n,
            "breaks": [float(b) for b in self.breaks],
            "heights": [float(h) for h in self.heights],
        }
        if self.counts is not None:
            d["counts"] = [int(c) for c in self.counts]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "HistogramModel":
        return cls(
            breaks=np.asarray(d["breaks"], dtype=float),
            heights=np.asarray(d["heights"], dtype=float),
            n=int(d["n"]),
            counts=np.asarray(d["counts"], dtype=np.int64) if "counts" in d else None,
        )


# ---------------------------------------------------------------------------
# constraint preparation


@dataclass(frozen=True)
class _ConstraintTable:
    """Dataset-specific band arrays of the interval system, grouped by right
    endpoint for the sweep."""

    a: np.ndarray  # left indices
    b: np.ndarray  # right indices, ascending
    lo: np.ndarray  # density lower bounds (+inf when the band is empty)
    hi: np.ndarray  # density upper bounds (-inf when the band is empty)
    start: np.ndarray  # start[i] .. start[i+1] rows have right endpoint i


def _constraint_table(sample: SortedSample, kappa: float) -> _ConstraintTable:
    n = sample.n
    j, k, _ = interval_arrays(n)
    x = sample.values
    counts = k - j
    uniq, inv = np.unique(counts, return_inverse=True)
    q_lo, q_hi = mass_roots_batch(uniq / n, kappa, n)
    width = x[k - 1] - x[j - 1]
    lo = q_lo[inv] / width
    hi = q_hi[inv] / width
    empty = np.isnan(lo)
    lo = np.where(empty, np.inf, lo)
    hi = np.where(empty, -np.inf, hi)
    start = np.searchsorted(k, np.arange(n + 2))
    return _ConstraintTable(a=j, b=k, lo=lo, hi=hi, start=start)


def segment_cost(
    j: int, i: int, sample: SortedSample, bands: list[FeasibleBand]
) -> float:
    """Cost of block (j, i], or +inf when some contained interval's band
    excludes the block's average density.

    Exhaustive containment semantics; the DP sweep reproduces this exactly.
    """
    if not 0 <= j < i <= sample.n:
        raise ValueError("need 0 <= j < i <= n")
    x = sample.values
    if j == 0:
        count = i
        width = x[i - 1] - x[0]
    else:
        count = i - j
        width = x[i - 1] - x[j - 1]
    if width <= 0.0:
        return np.inf
    mu = count / (sample.n * width)
    for band in bands:
        if band.interval.j >= max(j, 1) and band.interval.k <= i:
            if not band.contains(mu):
                return np.inf
    return -count * np.log(mu)


# ---------------------------------------------------------------------------
# Bellman solvers


def _block_geometry(x: np.ndarray, n: int, i: int):
    """counts and widths of blocks (j, i] for j = 0 .. i-1."""
    counts = np.empty(i, dtype=np.int64)
    counts[0] = i
    counts[1:] = i - np.arange(1, i)
    left = np.empty(i)
    left[0] = x[0]
    left[1:] = x[: i - 1]
    widths = x[i - 1] - left
    return counts, widths


def _feasible_mask(mu: np.ndarray, slo: np.ndarray, shi: np.ndarray) -> np.ndarray:
    return (mu >= slo * (1.0 - BAND_SLACK)) & (mu <= shi * (1.0 + BAND_SLACK))


def _bellman_unpruned(sample: SortedSample, table: _ConstraintTable):
    """Plain recursion over all predecessors; reference for the pruned solver."""
    x = sample.values
    n = sample.n
    big = n + 2
    K = np.full(n + 1, big, dtype=np.int64)
    V = np.full(n + 1, np.inf)
    pred = np.full(n + 1, -1, dtype=np.int64)
    K[0] = 0
    V[0] = 0.0
    # lmax[a] / umin[a]: tightest band among processed intervals with left
    # endpoint a; suffix aggregation over a >= j gives the block constraint
    lmax = np.full(n + 1, -np.inf)
    umin = np.full(n + 1, np.inf)
    for i in range(1, n + 1):
        for r in range(table.start[i], table.start[i + 1]):
            a = table.a[r]
            if table.lo[r] > lmax[a]:
                lmax[a] = table.lo[r]
            if table.hi[r] < umin[a]:
                umin[a] = table.hi[r]
        # slo[j], shi[j] for j = 0..i-1 (j = 0 aggregates a >= 1, same as j = 1)
        slo = np.maximum.accumulate(lmax[i - 1 :: -1])[::-1]
        shi = np.minimum.accumulate(umin[i - 1 :: -1])[::-1]
        slo[0] = slo[1] if i > 1 else lmax[0]
        shi[0] = shi[1] if i > 1 else umin[0]
        counts, widths = _block_geometry(x, n, i)
        with np.errstate(divide="ignore"):
            mu = counts / (n * widths)
        feas = _feasible_mask(mu, slo, shi) & (widths > 0.0) & (K[:i] < big)
        if not feas.any():
            continue
        kmin = K[:i][feas].min() + 1
        cand = feas & (K[:i] == kmin - 1)
        cost = V[:i] - counts * np.log(mu)
        cost = np.where(cand, cost, np.inf)
        jbest = int(np.argmin(cost))  # argmin takes the smallest index on ties
        K[i] = kmin
        V[i] = cost[jbest]
        pred[i] = jbest
    return K, V, pred


def _bellman_pruned(sample: SortedSample, table: _ConstraintTable):
    """Round-based recursion with search-set restriction and the empty-band
    stopping rule; output-identical to the unpruned recursion."""
    x = sample.values
    n = sample.n
    big = n + 2
    K = np.full(n + 1, big, dtype=np.int64)
    V = np.full(n + 1, np.inf)
    pred = np.full(n + 1, -1, dtype=np.int64)
    K[0] = 0
    V[0] = 0.0
    active = np.array([0], dtype=np.int64)
    k = 1
    while K[n] == big:
        base = int(active[0])  # smallest candidate left endpoint
        lmax = np.full(n + 1, -np.inf)
        umin = np.full(n + 1, np.inf)
        v_active = V[active]
        assigned = []
        for i in range(base + 1, n + 1):
            for r in range(table.start[i], table.start[i + 1]):
                a = table.a[r]
                if table.lo[r] > lmax[a]:
                    lmax[a] = table.lo[r]
                if table.hi[r] < umin[a]:
                    umin[a] = table.hi[r]
            lo_sl = lmax[base : i]
            hi_sl = umin[base : i]
            slo = np.maximum.accumulate(lo_sl[::-1])[::-1]
            shi = np.minimum.accumulate(hi_sl[::-1])[::-1]
            if base == 0:
                # the virtual node aggregates a >= 1 like node 1 does
                if i - base > 1:
                    slo[0] = slo[1]
                    shi[0] = shi[1]
            usable = active[active < i]
            slo_a = slo[usable - base]
            shi_a = shi[usable - base]
            if np.all(slo_a * (1.0 - BAND_SLACK) > shi_a * (1.0 + BAND_SLACK)):
                break  # no constant density fits any candidate block anymore
            if K[i] < big:
                continue
            if usable.size == 0:
                continue
            xi = x[i - 1]
            left = np.where(usable == 0, x[0], x[np.maximum(usable, 1) - 1])
            widths = xi - left
            counts = np.where(usable == 0, i, i - usable)
            with np.errstate(divide="ignore", invalid="ignore"):
                mu = counts / (n * widths)
            feas = (widths > 0.0) & _feasible_mask(mu, slo_a, shi_a)
            if not feas.any():
                continue
            cost = v_active[: usable.size] - counts * np.log(mu)
            cost = np.where(feas, cost, np.inf)
            pos = int(np.argmin(cost))
            K[i] = k
            V[i] = cost[pos]
            pred[i] = usable[pos]
            assigned.append(i)
        if not assigned:
            raise RuntimeError("dynamic program stalled; constraint table inconsistent")
        active = np.asarray(assigned, dtype=np.int64)
        k += 1
    return K, V, pred


def _backtrack(pred: np.ndarray, n: int) -> list[int]:
    cuts = [n]
    i = n
    while i > 0:
        i = int(pred[i])
        cuts.append(i)
    return cuts[::-1]


def _model_from_cuts(sample: SortedSample, cuts: list[int]) -> HistogramModel:
    """Histogram from segmentation nodes [0, t1, ..., n]; merges equal-height
    neighbors (pure representation cleanup, counts re-aggregated)."""
    x = sample.values
    n = sample.n
    counts = [cuts[1]] + [b - a for a, b in zip(cuts[1:], cuts[2:])]
    edges = [x[0]] + [x[t - 1] for t in cuts[1:]]
    heights = [
        c / (n * (r - l)) for c, l, r in zip(counts, edges[:-1], edges[1:])
    ]
    # merge neighbors whose heights coincide
    m_counts, m_edges = [counts[0]], [edges[0], edges[1]]
    for c, e, h_prev, h in zip(counts[1:], edges[2:], heights[:-1], heights[1:]):
        if abs(h - h_prev) <= MERGE_RTOL * max(h, h_prev):
            m_counts[-1] += c
            m_edges[-1] = e
        else:
            m_counts.append(c)
            m_edges.append(e)
    m_heights = [
        c / (n * (r - l)) for c, l, r in zip(m_counts, m_edges[:-1], m_edges[1:])
    ]
    return HistogramModel(
        breaks=np.asarray(m_edges),
        heights=np.asarray(m_heights),
        n=n,
        counts=np.asarray(m_counts, dtype=np.int64),
        cut_indices=tuple(cuts),
    )


def _single_bin(sample: SortedSample) -> HistogramModel:
    return _model_from_cuts(sample, [0, sample.n])


def essential_histogram(
    sample: SortedSample,
    alpha: float,
    table: QuantileTable,
    *,
    pruned: bool = True,
) -> HistogramModel:
    """The fewest-bins histogram whose every constant stretch passes the
    local constraints at level alpha; ties resolved by maximal likelihood.

    Falls back to a single bin when the interval system is empty (sample too
    small for multiscale calibration).
    """
    n = sample.n
    j, _, _ = interval_arrays(n)
    if j.size == 0:
        return _single_bin(sample)
    kappa = lookup_kappa(table, alpha, n)
    ctab = _constraint_table(sample, kappa)
    solver = _bellman_pruned if pruned else _bellman_unpruned
    K, V, pred = solver(sample, ctab)
    cuts = _backtrack(pred, n)
    return _model_from_cuts(sample, cuts)


def brute_force_histogram(
    sample: SortedSample, alpha: float, table: QuantileTable
) -> HistogramModel:
    """Exhaustive-search oracle over all segmentations; n <= 16.

    Ties: minimal block count, then minimal total cost, then the
    lexicographically smallest breakpoint index sequence.
    """
    n = sample.n
    if n > 16:
        raise ValueError("brute force limited to n <= 16")
    j, _, _ = interval_arrays(n)
    if j.size == 0:
        return _single_bin(sample)
    from .bounds import feasible_bands

    kappa = lookup_kappa(table, alpha, n)
    bands = feasible_bands(sample, kappa)
    cost = np.full((n + 1, n + 1), np.inf)
    for jj in range(0, n):
        for ii in range(jj + 1, n + 1):
            cost[jj, ii] = segment_cost(jj, ii, sample, bands)
    best = None  # (nblocks, total_cost, cuts)
    interior = range(2, n)  # a cut at 1 would leave a zero-width first block
    for r in range(0, n - 1):
        for combo in combinations(interior, r):
            nodes = (0,) + combo + (n,)
            total = 0.0
            ok = True
            for a, b in zip(nodes, nodes[1:]):
                c = cost[a, b]
                if not np.isfinite(c):
                    ok = False
                    break
                total += c
            if not ok:
                continue
            key = (len(nodes) - 1, total, combo)
            if best is None or key < best:
                best = key
        if best is not None and best[0] == r + 1:
            break  # minimal block count found; larger r only adds blocks
    if best is None:
        raise RuntimeError("no feasible segmentation found (should be impossible)")
    return _model_from_cuts(sample, [0, *best[2], n])
