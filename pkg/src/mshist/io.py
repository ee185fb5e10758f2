"""File formats: sample input, JSON documents for fits/features/audits, and
CSV emitters for plotting and benchmarks."""
from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Sequence

import numpy as np

from .densities import BENCHMARK_COLUMNS
from .dp import HistogramModel
from .evaluate import AuditReport
from .inference import FeatureInterval
from .intervals import IntervalSpec
from .sample import SortedSample


def read_sample(path, *, jitter: bool = False, seed: int = 0) -> SortedSample:
    """One numeric value per line; a single non-numeric first line is
    treated as a header.  Decimal point only, independent of locale."""
    lines = [ln.strip() for ln in Path(path).read_text().splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError(f"{path}: empty input")
    start = 0
    try:
        float(lines[0])
    except ValueError:
        start = 1  # single header line
    try:
        values = np.array([float(t) for t in lines[start:]], dtype=float)
    except ValueError as e:
        raise ValueError(f"{path}: non-numeric value ({e})") from None
    return SortedSample(values, jitter=jitter, seed=seed)


# ---------------------------------------------------------------------------
# JSON documents


def histogram_document(fit: HistogramModel, alpha: float | None = None) -> dict:
    doc = {"type": "histogram", **fit.to_dict()}
    if alpha is not None:
        doc["alpha"] = alpha
    return doc


def read_histogram(path) -> HistogramModel:
    doc = json.loads(Path(path).read_text())
    return HistogramModel.from_dict(doc)


def write_json(doc: dict, path) -> None:
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")


def feature_document(
    features: Sequence[FeatureInterval], alpha: float, bounds: tuple[int, int]
) -> dict:
    return {
        "type": "features",
        "alpha": alpha,
        "modes_lb": bounds[0],
        "troughs_lb": bounds[1],
        "features": [
            {
                "left": f.hull[0],
                "right": f.hull[1],
                "direction": f.direction,
                "margin": f.margin,
                "witnesses": [
                    {"j": w.j, "k": w.k, "scale": w.scale} for w in f.witnesses
                ],
            }
            for f in features
        ],
    }


def read_features(path) -> list[FeatureInterval]:
    doc = json.loads(Path(path).read_text())
    return [
        FeatureInterval(
            hull=(f["left"], f["right"]),
            direction=f["direction"],
            margin=f["margin"],
            witnesses=tuple(
                IntervalSpec(w["j"], w["k"], w["scale"]) for w in f["witnesses"]
            ),
        )
        for f in doc["features"]
    ]


def audit_document(report: AuditReport, sample: SortedSample) -> dict:
    x = sample.values
    return {
        "type": "audit",
        "alpha": report.alpha,
        "kappa": report.kappa,
        "clean": report.clean,
        "violations": [
            {
                "j": v.j,
                "k": v.k,
                "scale": v.scale,
                "left": float(x[v.j - 1]),
                "right": float(x[v.k - 1]),
            }
            for v in report.violations
        ],
        "removable": [
            {"index": cp, "multiplicity": mult} for cp, mult in report.removable
        ],
    }


# ---------------------------------------------------------------------------
# plot-ready CSV


def histogram_steps(fit: HistogramModel) -> list[tuple[float, float]]:
    """2K step coordinates (x, height) tracing the histogram left to right."""
    pts = []
    for i in range(fit.nbins):
        h = float(fit.heights[i])
        pts.append((float(fit.breaks[i]), h))
        pts.append((float(fit.breaks[i + 1]), h))
    return pts


def write_plot_data(doc: dict, path) -> None:
    """Step CSV for histogram documents, interval CSV for the others."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        if doc["type"] == "histogram":
            w.writerow(["x", "y"])
            for x, y in histogram_steps(HistogramModel.from_dict(doc)):
                w.writerow([repr(x), repr(y)])
        elif doc["type"] == "features":
            w.writerow(["left", "right", "direction", "margin"])
            for f in doc["features"]:
                w.writerow(
                    [repr(f["left"]), repr(f["right"]), f["direction"], repr(f["margin"])]
                )
        elif doc["type"] == "audit":
            w.writerow(["kind", "left", "right", "multiplicity"])
            for v in doc["violations"]:
                w.writerow(["violation", repr(v["left"]), repr(v["right"]), ""])
            for r in doc["removable"]:
                w.writerow(["removable", r["index"], "", r["multiplicity"]])
        else:
            raise ValueError(f"unknown document type {doc.get('type')!r}")


def write_benchmark_csv(rows: Sequence[dict], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=BENCHMARK_COLUMNS)
        w.writeheader()
        w.writerows(rows)
