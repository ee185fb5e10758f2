"""Sorted sample container: the sole data input of the library."""
from __future__ import annotations

import numpy as np


class DuplicateValuesError(ValueError):
    """Raised when a sample contains exact duplicates and jitter is off."""


class SortedSample:
    """Immutable, strictly increasing sample of n >= 2 real values.

    Exact duplicates are rejected by default: the methods here assume a
    continuous underlying distribution, so ties are a data-quality signal.
    With ``jitter=True`` ties are spread deterministically (seeded) within
    1e-9 times the local spacing.
    """

    __slots__ = ("_values",)

    def __init__(self, values, *, jitter: bool = False, seed: int = 0):
        v = np.sort(np.asarray(values, dtype=float))
        if v.ndim != 1 or v.size < 2:
            raise ValueError("need a 1-d sample with at least 2 values")
        if not np.all(np.isfinite(v)):
            raise ValueError("sample contains non-finite values")
        if np.any(np.diff(v) == 0.0):
            if not jitter:
                raise DuplicateValuesError(
                    "sample contains duplicate values; pass jitter=True to "
                    "spread ties deterministically"
                )
            v = _spread_ties(v, seed)
        self._values = v
        self._values.flags.writeable = False

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def n(self) -> int:
        return self._values.size

    def order_statistic(self, i: int) -> float:
        """X_(i), 1-based."""
        if not 1 <= i <= self.n:
            raise IndexError(f"order statistic index {i} out of range")
        return float(self._values[i - 1])

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"SortedSample(n={self.n}, range=[{self._values[0]:g}, {self._values[-1]:g}])"


def _spread_ties(v: np.ndarray, seed: int) -> np.ndarray:
    """Replace runs of equal values by a sorted uniform spread of width
    1e-9 times the local spacing."""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    out = v.copy()
    n = v.size
    i = 0
    while i < n:
        j = i
        while j + 1 < n and v[j + 1] == v[i]:
            j += 1
        if j > i:
            left = v[i - 1] if i > 0 else v[i] - 1.0
            right = v[j + 1] if j + 1 < n else v[j] + 1.0
            local = min(v[i] - left, right - v[i])
            eps = 1e-9 * local
            offsets = np.sort(rng.uniform(-eps, eps, size=j - i + 1))
            out[i : j + 1] = v[i] + offsets
        i = j + 1
    out = np.sort(out)
    if np.any(np.diff(out) == 0.0):
        raise DuplicateValuesError("jitter failed to separate ties")
    return out
