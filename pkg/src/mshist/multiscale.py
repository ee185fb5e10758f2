"""Penalized likelihood-ratio statistics over the interval system and the
Monte-Carlo calibration of their global quantile."""
from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .intervals import interval_arrays, IntervalSpec
from .sample import SortedSample

DEFAULT_ALPHAS = (0.01, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9)
DEFAULT_REPS = 5000
TABLE_VERSION = 1
#: every sample size at or above this is served by one shared table
TABLE_N_CAP = 10_000
CACHE_ENV_VAR = "MSHIST_CACHE_DIR"


def log_likelihood_ratio(p_hat, p0, n):
    """n * [p_hat*log(p_hat/p0) + (1-p_hat)*log((1-p_hat)/(1-p0))].

    Nonnegative, zero iff p_hat == p0.  Total on p_hat in [0, 1] via the
    0*log(0) = 0 convention; p0 must lie strictly inside (0, 1).
    Vectorized over all arguments.
    """
    p_hat = np.asarray(p_hat, dtype=float)
    p0 = np.asarray(p0, dtype=float)
    if np.any(p0 <= 0.0) or np.any(p0 >= 1.0):
        raise ValueError("hypothesized mass p0 must lie in (0, 1)")
    if np.any(p_hat < 0.0) or np.any(p_hat > 1.0):
        raise ValueError("empirical mass p_hat must lie in [0, 1]")
    with np.errstate(divide="ignore", invalid="ignore"):
        t1 = np.where(p_hat > 0.0, p_hat * np.log(p_hat / p0), 0.0)
        t2 = np.where(p_hat < 1.0, (1.0 - p_hat) * np.log((1.0 - p_hat) / (1.0 - p0)), 0.0)
    out = np.maximum(n * (t1 + t2), 0.0)  # analytically >= 0; guard rounding
    return out if out.ndim else float(out)


def penalty(p_hat):
    """Scale penalty sqrt(2*log(e / (p*(1-p)))); symmetric about 1/2 where it
    is minimal.  Vectorized."""
    p = np.asarray(p_hat, dtype=float)
    if np.any(p <= 0.0) or np.any(p >= 1.0):
        raise ValueError("p_hat must lie in (0, 1)")
    out = np.sqrt(2.0 * (1.0 - np.log(p * (1.0 - p))))
    return out if out.ndim else float(out)


def local_statistic(interval: IntervalSpec, mu: float, sample: SortedSample) -> float:
    """Penalized root-LR statistic of one interval against the constant
    density candidate ``mu``.

    Raises ValueError when ``mu * |I|`` leaves (0, 1), which signals an
    infeasible candidate (callers treat it as an infinite violation).
    """
    x = sample.values
    width = x[interval.k - 1] - x[interval.j - 1]
    p0 = mu * width
    if not 0.0 < p0 < 1.0:
        raise ValueError(f"candidate mass mu*|I| = {p0} outside (0, 1)")
    p_hat = interval.count / sample.n
    return float(
        np.sqrt(2.0 * log_likelihood_ratio(p_hat, p0, sample.n)) - penalty(p_hat)
    )


def multiscale_statistic(sample: SortedSample, true_mass=None, *, cdf=None) -> float:
    """Global statistic: the maximum over the interval system of the
    penalized root-LR deviation between the true interval mass and the
    empirical one.

    ``true_mass`` maps an IntervalSpec to its mass under the true
    distribution; alternatively pass a vectorized ``cdf`` for speed.
    """
    n = sample.n
    j, k, _ = interval_arrays(n)
    if j.size == 0:
        raise ValueError(f"interval system empty for n={n}; sample too small")
    if cdf is not None:
        x = sample.values
        p0 = cdf(x[k - 1]) - cdf(x[j - 1])
    elif true_mass is not None:
        from .intervals import build_interval_system

        p0 = np.array([true_mass(iv) for iv in build_interval_system(n)])
    else:
        raise ValueError("provide true_mass or cdf")
    p_hat = (k - j) / n
    stat = np.sqrt(2.0 * log_likelihood_ratio(p_hat, p0, n)) - penalty(p_hat)
    return float(stat.max())


def _replication_statistic(n: int, seed: int, rep: int, distribution: str) -> float:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(rep,))
    rng = np.random.Generator(np.random.Philox(ss))
    if distribution == "uniform":
        x = np.sort(rng.random(n))
        cdf = lambda v: v
    elif distribution == "exponential":
        x = np.sort(rng.exponential(size=n))
        cdf = lambda v: -np.expm1(-v)
    else:
        raise ValueError(f"unknown distribution {distribution!r}")
    return multiscale_statistic(SortedSample(x), cdf=cdf)


def _replication_block(args):
    n, seed, reps_slice, distribution = args
    return [_replication_statistic(n, seed, r, distribution) for r in reps_slice]


def simulate_statistics(
    n: int,
    reps: int,
    seed: int = 0,
    *,
    distribution: str = "uniform",
    workers: int = 1,
) -> np.ndarray:
    """``reps`` independent draws of the global statistic for sample size n.

    Each replication has its own counter-derived RNG stream, so the result
    is identical for any degree of parallelism.
    """
    jj, _, _ = interval_arrays(n)
    if jj.size == 0:
        raise ValueError(f"interval system empty for n={n}; cannot calibrate")
    if workers <= 1:
        out = [_replication_statistic(n, seed, r, distribution) for r in range(reps)]
    else:
        blocks = [
            (n, seed, range(w, reps, workers), distribution) for w in range(workers)
        ]
        out = [np.nan] * reps
        with ProcessPoolExecutor(max_workers=workers) as ex:
            for block, vals in zip(blocks, ex.map(_replication_block, blocks)):
                for r, v in zip(block[2], vals):
                    out[r] = v
    return np.asarray(out, dtype=float)


@dataclass(frozen=True)
class QuantileTable:
    """Calibrated thresholds of the global statistic for one sample size.

    ``kappas[i]`` is the empirical (1 - alphas[i])-quantile over ``reps``
    Monte-Carlo replications; nonincreasing along the ascending alpha grid.
    """

    n: int
    alphas: tuple[float, ...]
    kappas: tuple[float, ...]
    reps: int
    seed: int
    version: int = TABLE_VERSION

    def __post_init__(self):
        a = np.asarray(self.alphas)
        if a.size == 0 or np.any(a <= 0) or np.any(a >= 1) or np.any(np.diff(a) <= 0):
            raise ValueError("alphas must be strictly increasing inside (0, 1)")
        if self.reps < 1:
            raise ValueError("reps must be >= 1")
        k = np.asarray(self.kappas)
        if k.size != a.size or np.any(np.diff(k) > 1e-12):
            raise ValueError("kappas must match alphas and be nonincreasing")

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "n": self.n,
            "reps": self.reps,
            "seed": self.seed,
            "alphas": list(self.alphas),
            "kappas": list(self.kappas),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "QuantileTable":
        return cls(
            n=int(d["n"]),
            alphas=tuple(float(a) for a in d["alphas"]),
            kappas=tuple(float(k) for k in d["kappas"]),
            reps=int(d["reps"]),
            seed=int(d["seed"]),
            version=int(d["version"]),
        )


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "mshist"


def _cache_path(cache_dir: Path, n: int, reps: int, seed: int) -> Path:
    return cache_dir / f"kappa_v{TABLE_VERSION}_n{n}_reps{reps}_seed{seed}.json"


def simulate_quantiles(
    n: int,
    alphas=DEFAULT_ALPHAS,
    reps: int = DEFAULT_REPS,
    seed: int = 0,
    *,
    workers: int = 1,
    cache_dir=None,
    use_cache: bool = True,
) -> QuantileTable:
    """Calibrate thresholds for sample size n on an alpha grid.

    Sample sizes above the cap share one table (the statistic's distribution
    has visibly converged there).  Tables are cached as write-once JSON files
    keyed by (capped n, reps, seed, format version).
    """
    if reps < 100:
        raise ValueError("reps must be >= 100")
    n_capped = min(n, TABLE_N_CAP)
    alphas = tuple(float(a) for a in alphas)
    cache_dir = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    path = _cache_path(cache_dir, n_capped, reps, seed)
    if use_cache and path.exists():
        table = QuantileTable.from_dict(json.loads(path.read_text()))
        if table.alphas == alphas:
            return table
    t = simulate_statistics(n_capped, reps, seed, workers=workers)
    t.sort()
    kappas = tuple(float(np.quantile(t, 1.0 - a)) for a in alphas)
    table = QuantileTable(
        n=n_capped, alphas=alphas, kappas=kappas, reps=reps, seed=seed
    )
    if use_cache:
        cache_dir.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(table.to_dict()))
        os.replace(tmp, path)
    return table


def load_table(path) -> QuantileTable:
    return QuantileTable.from_dict(json.loads(Path(path).read_text()))


def save_table(table: QuantileTable, path) -> None:
    Path(path).write_text(json.dumps(table.to_dict()))


def lookup_kappa(table: QuantileTable, alpha: float, n: int) -> float:
    """Threshold for level alpha and sample size n.

    Sizes above the cap are served by the capped table; the table's own n
    must match the capped request.  Alpha is linearly interpolated on the
    grid; extrapolation outside the grid is an error.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    n_capped = min(n, TABLE_N_CAP)
    if table.n != n_capped:
        raise ValueError(
            f"table was simulated for n={table.n}, but the request needs n={n_capped}"
        )
    a = np.asarray(table.alphas)
    k = np.asarray(table.kappas)
    if alpha < a[0] or alpha > a[-1]:
        raise ValueError(
            f"alpha={alpha} outside the calibrated grid [{a[0]}, {a[-1]}]"
        )
    return float(np.interp(alpha, a, k))
