"""Multiscale system of order-statistic intervals.

The system is a union of dyadic levels.  At level ``l`` the admissible
interval lengths (in sample counts) lie in ``(m_l, 2*m_l]`` with
``m_l = n * 2**-l``, and both endpoints are restricted to the thinned grid
``{1 + i*d_l}`` with ``d_l = ceil(m_l / (6*sqrt(l)))``.  Levels run from 2 to
``floor(log2(n / log n))``, so the total size is O(n) up to a polylog factor
while still approximating the family of all intervals well enough for the
statistics built on top of it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@dataclass(frozen=True)
class IntervalSpec:
    """Order-statistic interval (X_(j), X_(k)] identified by its indices.

    ``j`` is the (exclusive) left order-statistic index, ``k`` the right one,
    1 <= j < k <= n.  ``scale`` is the dyadic level that produced it.  Only
    indices are stored, so one system serves any dataset of the same size.
    """

    j: int
    k: int
    scale: int

    @property
    def count(self) -> int:
        return self.k - self.j


def max_scale(n: int, *, log_base: str = "natural") -> int:
    """Deepest dyadic level; ``log_base`` selects how the inner log of
    n/log(n) is read ("natural" default, "base2" shrinks by <= 1 level)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    inner = math.log(n) if log_base == "natural" else math.log2(n)
    if inner <= 0 or n / inner <= 1:
        return 0
    return int(math.floor(math.log2(n / inner)))


@lru_cache(maxsize=64)
def interval_arrays(n: int, log_base: str = "natural"):
    """(j, k, scale) index arrays of the full system, sorted by (k, j).

    Cached per n; arrays are read-only.
    """
    lmax = max_scale(n, log_base=log_base)
    js, ks, ls = [], [], []
    for lev in range(2, lmax + 1):
        m = n * 2.0 ** (-lev)
        d = int(math.ceil(m / (6.0 * math.sqrt(lev))))
        # admissible integer lengths are the multiples of d in (m, 2m]
        w = d * int(math.floor(m / d) + 1)
        while w <= 2.0 * m:
            j = np.arange(1, n - w + 1, d, dtype=np.int64)
            if j.size:
                js.append(j)
                ks.append(j + w)
                ls.append(np.full(j.size, lev, dtype=np.int64))
            w += d
    if not js:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty.copy(), empty.copy()
    j = np.concatenate(js)
    k = np.concatenate(ks)
    lev = np.concatenate(ls)
    order = np.lexsort((lev, j, k))
    j, k, lev = j[order], k[order], lev[order]
    # adjacent levels produce disjoint length ranges, but keep the smallest
    # level defensively should a duplicate (j, k) ever arise
    keep = np.ones(j.size, dtype=bool)
    keep[1:] = (np.diff(k) != 0) | (np.diff(j) != 0)
    j, k, lev = j[keep], k[keep], lev[keep]
    for a in (j, k, lev):
        a.flags.writeable = False
    return j, k, lev


def build_interval_system(n: int, *, log_base: str = "natural") -> list[IntervalSpec]:
    """All intervals of the system for sample size n, sorted by right index
    then left index.  Empty when no level >= 2 exists (small n)."""
    j, k, lev = interval_arrays(n, log_base)
    return [IntervalSpec(int(a), int(b), int(s)) for a, b, s in zip(j, k, lev)]


def intervals_within(system: list[IntervalSpec], j: int, k: int) -> list[IntervalSpec]:
    """Members of ``system`` contained in the index range (j, k].

    Index containment (j <= I.j and I.k <= k) is equivalent to set
    containment of the half-open value intervals.
    """
    if not 0 <= j < k:
        raise ValueError("need 0 <= j < k")
    return [iv for iv in system if j <= iv.j and iv.k <= k]
