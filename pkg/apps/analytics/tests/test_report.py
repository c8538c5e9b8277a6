import json

import numpy as np
import pytest

from app.metrics.histogram import ScoreHistogram
from app.metrics.report import MetricReport, ReportWriter, dumps_json, format_cell, staged_output
from app.schemas.pydantic.reports import BasicStats, LifecycleCounts


def test_format_cell():
    assert format_cell(None) == ""
    assert format_cell(True) == "true"
    assert format_cell(0.1) == "0.1"
    assert format_cell(2 / 3) == repr(2 / 3)
    assert format_cell(7) == "7"


def test_dumps_json_is_sorted_and_pretty():
    text = dumps_json(BasicStats(n_posts=2))
    assert text.endswith("\n")
    keys = list(json.loads(text))
    assert keys == sorted(keys)


def test_writer_csv_quoting(tmp_path):
    writer = ReportWriter(tmp_path)
    path = writer.write_csv("x.csv", ("a", "b"), [("hello, world", None), ('say "hi"', 1.5)])
    assert path.read_bytes() == b'a,b\n"hello, world",\n"say ""hi""",1.5\n'
    assert writer.written == [path]


def test_staged_output_publishes_on_success(tmp_path):
    out = tmp_path / "out"
    with staged_output(out) as writer:
        writer.write_json("a.json", {"b": 1, "a": 2})
        assert not out.exists()
    assert json.loads((out / "a.json").read_text()) == {"a": 2, "b": 1}
    assert [p.name for p in tmp_path.iterdir()] == ["out"]


def test_staged_output_removes_partial_files(tmp_path):
    out = tmp_path / "out"
    with pytest.raises(RuntimeError):
        with staged_output(out) as writer:
            writer.write_json("a.json", {})
            raise RuntimeError("boom")
    assert list(tmp_path.iterdir()) == []


def test_metric_report_merge():
    left = MetricReport().add_counters("stats", BasicStats(n_posts=2))
    left.histograms["h"] = ScoreHistogram(0, 1, 2).extend([0.1])
    left.scores["s"] = {"a": 0.5}
    right = MetricReport().add_counters("stats", {"n_posts": 3, "label": "skip"})
    right.histograms["h"] = ScoreHistogram(0, 1, 2).extend([0.9])
    right.scores["s"] = {"b": 1.0}

    merged = left.merge(right).to_dict()
    assert merged["counters"]["stats.n_posts"] == 5
    assert merged["counters"]["stats.n_comments"] == 0
    assert "stats.label" not in merged["counters"]
    assert merged["histograms"]["h"] == [[0.0, 0.5, 1], [0.5, 1.0, 1]]
    assert merged["scores"]["s"] == {"a": 0.5, "b": 1.0}
    with pytest.raises(ValueError):
        left.merge(left)


def test_dumps_json_converts_models_nested_in_containers():
    payload = {
        "classes": LifecycleCounts(min_comments=5, early_bloomers=2),
        "stats": [BasicStats(n_posts=3)],
        "mean": np.float64(0.25),
    }
    data = json.loads(dumps_json(payload))
    assert data["classes"] == {"min_comments": 5, "early_bloomers": 2, "steady": 0, "late_bloomers": 0}
    assert data["stats"][0]["n_posts"] == 3
    assert data["mean"] == 0.25


def test_dumps_json_rejects_unknown_objects():
    with pytest.raises(Exception):
        dumps_json({"x": object()})
