"""Mergeable histograms used for plot-ready outputs.

Two flavours:

* ``Histogram`` over an open-ended axis (ages, depths) with a linear or
  logarithmic bin spec; bins are addressed by integer index so two shards
  can be merged by adding their counters.
* ``ScoreHistogram`` over a fixed closed range such as [0, 1] or [-1, 1].
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Union

import numpy as np

from app.services.exceptions import BadBinSpec

# below this the log index is nudged so values sitting on an edge land in the upper bin
_EDGE_EPS = 1e-9
_EDGE_DIGITS = 12


@dataclass(frozen=True)
class LinearBinSpec:
    width: float = 1.0
    origin: float = 0.0

    def __post_init__(self) -> None:
        if not (self.width > 0 and math.isfinite(self.width)):
            raise BadBinSpec(f"linear bin width must be positive, got {self.width}")

    def index(self, value: float) -> int:
        return math.floor((value - self.origin) / self.width)

    def edges(self, index: int) -> tuple[float, float]:
        lo = self.origin + index * self.width
        return round(lo, _EDGE_DIGITS), round(lo + self.width, _EDGE_DIGITS)


@dataclass(frozen=True)
class LogBinSpec:
    """`bins_per_decade` logarithmic bins starting at `min_value`; values
    below `min_value` (age 0) share the extra bin [0, min_value) at index -1."""

    bins_per_decade: int = 20
    min_value: float = 1.0

    def __post_init__(self) -> None:
        if self.bins_per_decade <= 0:
            raise BadBinSpec(f"bins_per_decade must be positive, got {self.bins_per_decade}")
        if not (self.min_value > 0 and math.isfinite(self.min_value)):
            raise BadBinSpec(f"min_value must be positive, got {self.min_value}")

    def index(self, value: float) -> int:
        if value < 0:
            raise ValueError(f"log-binned values must be non-negative, got {value}")
        if value < self.min_value:
            return -1
        return math.floor(self.bins_per_decade * math.log10(value / self.min_value) + _EDGE_EPS)

    def edges(self, index: int) -> tuple[float, float]:
        if index < 0:
            return 0.0, float(self.min_value)
        lo = self.min_value * 10 ** (index / self.bins_per_decade)
        hi = self.min_value * 10 ** ((index + 1) / self.bins_per_decade)
        return round(lo, _EDGE_DIGITS), round(hi, _EDGE_DIGITS)


BinSpec = Union[LinearBinSpec, LogBinSpec]


@dataclass(frozen=True)
class HistogramRow:
    bin_lo: float
    bin_hi: float
    count: int
    density: float


@dataclass
class Histogram:
    spec: BinSpec
    counts: Counter[int] = field(default_factory=Counter)

    def add(self, value: float) -> None:
        self.counts[self.spec.index(value)] += 1

    def extend(self, values: Iterable[float]) -> "Histogram":
        index = self.spec.index
        self.counts.update(index(v) for v in values)
        return self

    def merge(self, other: "Histogram") -> "Histogram":
        if other.spec != self.spec:
            raise BadBinSpec("cannot merge histograms with different bin specs")
        return Histogram(self.spec, self.counts + other.counts)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def rows(self) -> List[HistogramRow]:
        """Contiguous rows from the lowest to the highest populated bin."""
        if not self.counts:
            return []
        total = self.total
        lo_idx, hi_idx = min(self.counts), max(self.counts)
        out: List[HistogramRow] = []
        for idx in range(lo_idx, hi_idx + 1):
            lo, hi = self.spec.edges(idx)
            count = self.counts.get(idx, 0)
            out.append(HistogramRow(lo, hi, count, count / (total * (hi - lo))))
        return out


@dataclass
class ScoreHistogram:
    """Equal-width bins over [lo, hi]; the last bin is closed on the right."""

    lo: float = 0.0
    hi: float = 1.0
    n_bins: int = 20
    counts: List[int] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.n_bins <= 0 or not self.hi > self.lo:
            raise BadBinSpec(f"bad score range [{self.lo}, {self.hi}] with {self.n_bins} bins")
        if not self.counts:
            self.counts = [0] * self.n_bins
        elif len(self.counts) != self.n_bins:
            raise BadBinSpec("counts length does not match n_bins")

    def extend(self, values: Iterable[float]) -> "ScoreHistogram":
        arr = np.fromiter(values, dtype=float)
        if arr.size == 0:
            return self
        if np.any(arr < self.lo) or np.any(arr > self.hi):
            raise ValueError(f"score outside [{self.lo}, {self.hi}]")
        idx = np.floor((arr - self.lo) / (self.hi - self.lo) * self.n_bins).astype(np.int64)
        idx = np.clip(idx, 0, self.n_bins - 1)
        added = np.bincount(idx, minlength=self.n_bins)
        self.counts = [int(a + b) for a, b in zip(self.counts, added)]
        return self

    def merge(self, other: "ScoreHistogram") -> "ScoreHistogram":
        if (other.lo, other.hi, other.n_bins) != (self.lo, self.hi, self.n_bins):
            raise BadBinSpec("cannot merge score histograms with different ranges")
        return ScoreHistogram(
            self.lo, self.hi, self.n_bins, [a + b for a, b in zip(self.counts, other.counts)]
        )

    @property
    def total(self) -> int:
        return sum(self.counts)

    def edges(self, index: int) -> tuple[float, float]:
        width = (self.hi - self.lo) / self.n_bins
        return (
            round(self.lo + index * width, _EDGE_DIGITS),
            round(self.lo + (index + 1) * width, _EDGE_DIGITS),
        )

    def rows(self, with_cdf: bool = False) -> List[tuple[float, ...]]:
        total = self.total
        running = 0
        out: List[tuple[float, ...]] = []
        for idx, count in enumerate(self.counts):
            lo, hi = self.edges(idx)
            running += count
            if with_cdf:
                cdf: Optional[float] = running / total if total else None
                out.append((lo, hi, count, cdf))  # type: ignore[arg-type]
            else:
                out.append((lo, hi, count))
        return out
