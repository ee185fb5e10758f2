"""Fewest-bins histograms with simultaneous multiscale confidence guarantees.

The estimator returned by :func:`essential_histogram` uses as few bins as any
histogram that stays inside a multiscale likelihood-ratio confidence set, so
every bin boundary it shows is statistically necessary and every feature it
omits is statistically insignificant at the chosen level.
"""
from .bounds import FeasibleBand, constraint_interval, feasible_bands, mass_roots
from .densities import (
    MetricSet,
    ReferenceDensity,
    benchmark_rows,
    catalog,
    classical_histogram,
    get_density,
    metrics,
    proposition1_check,
)
from .dp import HistogramModel, brute_force_histogram, essential_histogram, segment_cost
from .evaluate import AuditReport, audit, removable_changepoints, violation_intervals
from .inference import (
    FeatureInterval,
    confidence_radius,
    lower_bound_modes,
    significant_feature_intervals,
)
from .intervals import IntervalSpec, build_interval_system, intervals_within, max_scale
from .multiscale import (
    QuantileTable,
    load_table,
    local_statistic,
    log_likelihood_ratio,
    lookup_kappa,
    multiscale_statistic,
    penalty,
    save_table,
    simulate_quantiles,
    simulate_statistics,
)
from .sample import DuplicateValuesError, SortedSample

__version__ = "0.1.0"

__all__ = [
    "AuditReport",
    "DuplicateValuesError",
    "FeasibleBand",
    "FeatureInterval",
    "HistogramModel",
    "IntervalSpec",
    "MetricSet",
    "QuantileTable",
    "ReferenceDensity",
    "SortedSample",
    "audit",
    "benchmark_rows",
    "brute_force_histogram",
    "build_interval_system",
    "catalog",
    "classical_histogram",
    "confidence_radius",
    "constraint_interval",
    "essential_histogram",
    "feasible_bands",
    "get_density",
    "intervals_within",
    "load_table",
    "local_statistic",
    "log_likelihood_ratio",
    "lookup_kappa",
    "lower_bound_modes",
    "mass_roots",
    "max_scale",
    "metrics",
    "multiscale_statistic",
    "penalty",
    "proposition1_check",
    "removable_changepoints",
    "save_table",
    "segment_cost",
    "significant_feature_intervals",
    "simulate_quantiles",
    "simulate_statistics",
    "violation_intervals",
]
