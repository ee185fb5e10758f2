import csv
import json

import numpy as np
import pytest

from mshist.densities import get_density
from mshist.dp import HistogramModel, essential_histogram
from mshist.evaluate import audit
from mshist.inference import lower_bound_modes, significant_feature_intervals
from mshist.io import (
    audit_document,
    feature_document,
    histogram_document,
    histogram_steps,
    read_features,
    read_histogram,
    read_sample,
    write_json,
    write_plot_data,
)
from mshist.sample import DuplicateValuesError


class TestReadSample:
    def test_plain_values(self, tmp_path):
        p = tmp_path / "d.txt"
        p.write_text("0.5\n0.1\n0.9\n")
        s = read_sample(p)
        assert s.values.tolist() == [0.1, 0.5, 0.9]

    def test_header_detected(self, tmp_path):
        p = tmp_path / "d.txt"
        p.write_text("value\n0.5\n0.1\n")
        assert read_sample(p).n == 2

    def test_blank_lines_skipped(self, tmp_path):
        p = tmp_path / "d.txt"
        p.write_text("\n0.5\n\n0.1\n\n")
        assert read_sample(p).n == 2

    def test_garbage_rejected(self, tmp_path):
        p = tmp_path / "d.txt"
        p.write_text("0.5\nabc\n0.1\n")
        with pytest.raises(ValueError):
            read_sample(p)

    def test_empty_rejected(self, tmp_path):
        p = tmp_path / "d.txt"
        p.write_text("")
        with pytest.raises(ValueError):
            read_sample(p)

    def test_duplicates_respect_jitter_flag(self, tmp_path):
        p = tmp_path / "d.txt"
        p.write_text("1.0\n1.0\n2.0\n")
        with pytest.raises(DuplicateValuesError):
            read_sample(p)
        assert read_sample(p, jitter=True).n == 3


class TestDocuments:
    def test_histogram_roundtrip(self, tmp_path):
        m = HistogramModel(
            np.array([0.0, 1.0, 3.0]), np.array([0.5, 0.25]), 10,
            counts=np.array([5, 5]),
        )
        path = tmp_path / "h.json"
        write_json(histogram_document(m, 0.1), path)
        assert read_histogram(path) == m
        assert json.loads(path.read_text())["alpha"] == 0.1

    def test_feature_roundtrip(self, tables, tmp_path):
        sample = get_density("bimodal").sampler(7, 900)
        feats = significant_feature_intervals(sample, 0.1, tables(900))
        doc = feature_document(feats, 0.1, lower_bound_modes(feats))
        path = tmp_path / "f.json"
        write_json(doc, path)
        assert read_features(path) == feats

    def test_audit_document_fields(self, tables):
        sample = get_density("uniform").sampler(1, 300)
        fit = essential_histogram(sample, 0.1, tables(300))
        doc = audit_document(audit(sample, fit, 0.1, tables(300)), sample)
        assert doc["clean"] is True
        assert doc["violations"] == [] and doc["removable"] == []


class TestPlotData:
    def test_histogram_steps(self):
        m = HistogramModel(np.array([0.0, 1.0, 3.0]), np.array([0.5, 0.25]), 10)
        pts = histogram_steps(m)
        assert len(pts) == 4
        assert pts[0] == (0.0, 0.5) and pts[-1] == (3.0, 0.25)

    def test_single_bin_two_points(self, tmp_path):
        m = HistogramModel(np.array([0.0, 2.0]), np.array([0.5]), 10)
        path = tmp_path / "h.csv"
        write_plot_data(histogram_document(m), path)
        rows = list(csv.reader(path.open()))
        assert rows[0] == ["x", "y"]
        assert len(rows) == 3

    def test_feature_csv_roundtrip(self, tables, tmp_path):
        sample = get_density("bimodal").sampler(7, 900)
        feats = significant_feature_intervals(sample, 0.1, tables(900))
        doc = feature_document(feats, 0.1, lower_bound_modes(feats))
        path = tmp_path / "f.csv"
        write_plot_data(doc, path)
        rows = list(csv.DictReader(path.open()))
        assert len(rows) == len(feats)
        for row, f in zip(rows, feats):
            assert (float(row["left"]), float(row["right"])) == f.hull
            assert row["direction"] == f.direction

    def test_unknown_type(self, tmp_path):
        with pytest.raises(ValueError):
            write_plot_data({"type": "wat"}, tmp_path / "x.csv")
