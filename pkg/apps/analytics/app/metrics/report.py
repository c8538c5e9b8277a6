"""Deterministic report serialization and the mergeable MetricReport.

Reports are compared byte-for-byte across shard counts and reruns, so every
writer here fixes ordering (sorted JSON keys, caller-sorted CSV rows),
float formatting (shortest round-trip repr) and line endings.
"""
from __future__ import annotations

import csv
import json
import logging
import os
import shutil
import tempfile
from collections import Counter
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Sequence

import numpy as np
from pydantic import BaseModel
from pydantic_core import to_jsonable_python

from app.metrics.histogram import Histogram, ScoreHistogram

logger = logging.getLogger(__name__)


def format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _builtin_scalar(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def dumps_json(payload: Any) -> str:
    # models may sit anywhere inside dicts and lists
    data = to_jsonable_python(payload, fallback=_builtin_scalar)
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


class ReportWriter:
    """Writes CSV (header + RFC-style quoting) and pretty JSON into one directory."""

    def __init__(self, directory: Path) -> None:
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.written: List[Path] = []

    def write_csv(self, name: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
        path = self.directory / name
        n_rows = 0
        with path.open("w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
            writer.writerow(header)
            for row in rows:
                writer.writerow([format_cell(v) for v in row])
                n_rows += 1
        logger.debug("wrote %s (%d rows)", path.name, n_rows)
        self.written.append(path)
        return path

    def write_json(self, name: str, payload: Any) -> Path:
        path = self.directory / name
        path.write_text(dumps_json(payload), encoding="utf-8")
        logger.debug("wrote %s", path.name)
        self.written.append(path)
        return path

    def write_lines(self, name: str, lines: Iterable[str]) -> Path:
        path = self.directory / name
        with path.open("w", encoding="utf-8", newline="") as fh:
            for line in lines:
                fh.write(line)
                fh.write("\n")
        self.written.append(path)
        return path


@contextmanager
def staged_output(out_dir: Path) -> Iterator[ReportWriter]:
    """Yield a writer on a sibling staging directory; publish into `out_dir`
    only when the block completes, otherwise remove everything written."""
    out_dir = Path(out_dir)
    out_dir.parent.mkdir(parents=True, exist_ok=True)
    staging = Path(tempfile.mkdtemp(prefix=f".{out_dir.name}.partial-", dir=out_dir.parent))
    try:
        writer = ReportWriter(staging)
        yield writer
        out_dir.mkdir(parents=True, exist_ok=True)
        for path in writer.written:
            os.replace(path, out_dir / path.name)
    finally:
        shutil.rmtree(staging, ignore_errors=True)


@dataclass
class MetricReport:
    """Counters, histograms and per-entity scores that merge across shards."""

    counters: Counter[str] = field(default_factory=Counter)
    histograms: Dict[str, Histogram | ScoreHistogram] = field(default_factory=dict)
    scores: Dict[str, Dict[str, float]] = field(default_factory=dict)

    def add_counters(self, prefix: str, values: Mapping[str, Any] | BaseModel) -> "MetricReport":
        data = values.model_dump() if isinstance(values, BaseModel) else dict(values)
        for key, value in data.items():
            if isinstance(value, int) and not isinstance(value, bool):
                self.counters[f"{prefix}.{key}"] += value
        return self

    def merge(self, other: "MetricReport") -> "MetricReport":
        histograms: Dict[str, Histogram | ScoreHistogram] = dict(self.histograms)
        for name, hist in other.histograms.items():
            mine = histograms.get(name)
            if mine is None:
                histograms[name] = hist
            elif isinstance(mine, Histogram) and isinstance(hist, Histogram):
                histograms[name] = mine.merge(hist)
            elif isinstance(mine, ScoreHistogram) and isinstance(hist, ScoreHistogram):
                histograms[name] = mine.merge(hist)
            else:
                raise TypeError(f"histogram {name} has mismatched kinds")
        scores = {k: dict(v) for k, v in self.scores.items()}
        for group, entries in other.scores.items():
            target = scores.setdefault(group, {})
            overlap = target.keys() & entries.keys()
            if overlap:
                raise ValueError(f"score group {group} defined twice for {sorted(overlap)[:3]}")
            target.update(entries)
        counters = Counter(self.counters)
        counters.update(other.counters)  # keeps zero-valued keys, unlike `+`
        return MetricReport(counters, histograms, scores)

    def to_dict(self) -> Dict[str, Any]:
        hist_out: Dict[str, Any] = {}
        for name, hist in sorted(self.histograms.items()):
            if isinstance(hist, Histogram):
                hist_out[name] = [[r.bin_lo, r.bin_hi, r.count] for r in hist.rows()]
            else:
                hist_out[name] = [list(r) for r in hist.rows()]
        return {
            "counters": dict(sorted(self.counters.items())),
            "histograms": hist_out,
            "scores": {k: dict(sorted(v.items())) for k, v in sorted(self.scores.items())},
        }
