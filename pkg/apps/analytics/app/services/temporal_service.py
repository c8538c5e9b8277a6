"""Inter-event times and the burstiness measure B = (sigma - mu) / (sigma + mu).

sigma is the population standard deviation. B is -1 for a perfectly regular
series, about 0 for Poisson arrivals and approaches 1 for very bursty ones.
"""
from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from app.core.config import settings
from app.metrics.histogram import ScoreHistogram
from app.schemas.pydantic.reports import BurstinessOverview
from app.text.markers import is_deleted_author
from .exceptions import DegenerateSeries, TooFewEvents

if TYPE_CHECKING:
    from .ingest_service import Corpus

logger = logging.getLogger(__name__)

BURSTINESS_CSV_HEADER = ("owner_id", "kind", "n_events", "mu", "sigma", "B")


class EventKind(str, Enum):
    POSTING = "posting"
    COMMENTING = "commenting"
    POST_COMMENTS = "post-comments"


@dataclass(frozen=True)
class BurstinessResult:
    n_events: int
    n_intervals: int
    mu: float
    sigma: float
    b: float
    owner: Optional[str] = None
    kind: Optional[EventKind] = None

    def csv_row(self) -> Tuple[object, ...]:
        kind = self.kind.value if self.kind else None
        return self.owner, kind, self.n_events, self.mu, self.sigma, self.b


def interevent_times(timestamps: Sequence[int]) -> List[int]:
    if len(timestamps) < 2:
        raise TooFewEvents(len(timestamps))
    taus = np.diff(np.asarray(timestamps, dtype=np.int64))
    if np.any(taus < 0):
        raise ValueError("timestamps must be sorted in non-decreasing order")
    return taus.tolist()


def burstiness(
    taus: Sequence[float],
    owner: Optional[str] = None,
    kind: Optional[EventKind] = None,
) -> BurstinessResult:
    arr = np.asarray(taus, dtype=np.float64)
    if arr.size == 0:
        raise TooFewEvents(1)
    mu = float(arr.mean())
    # constant series are exactly regular; skip the rounding noise of std()
    sigma = 0.0 if np.all(arr == arr[0]) else float(arr.std(ddof=0))
    if sigma + mu == 0:
        raise DegenerateSeries(owner)
    return BurstinessResult(
        n_events=int(arr.size) + 1,
        n_intervals=int(arr.size),
        mu=mu,
        sigma=sigma,
        b=(sigma - mu) / (sigma + mu),
        owner=owner,
        kind=kind,
    )


@dataclass
class BurstinessSummary:
    kind: EventKind
    min_events: int
    results: Dict[str, BurstinessResult] = field(default_factory=dict)
    histogram: ScoreHistogram = field(
        default_factory=lambda: ScoreHistogram(-1.0, 1.0, settings.SCORE_HISTOGRAM_BINS)
    )
    n_degenerate_skipped: int = 0

    @property
    def mean_b(self) -> Optional[float]:
        if not self.results:
            return None
        return float(np.mean([r.b for r in self.results.values()]))

    def overview(self) -> BurstinessOverview:
        return BurstinessOverview(
            kind=self.kind.value,
            min_events=self.min_events,
            n_qualifying=len(self.results),
            n_degenerate_skipped=self.n_degenerate_skipped,
            mean_b=self.mean_b,
        )

    def rows(self) -> List[Tuple[object, ...]]:
        return [self.results[owner].csv_row() for owner in sorted(self.results)]


def summarize_series(
    series: Dict[str, List[int]], kind: EventKind, min_events: int
) -> BurstinessSummary:
    summary = BurstinessSummary(kind=kind, min_events=min_events)
    for owner in sorted(series):
        timestamps = sorted(series[owner])
        if len(timestamps) < max(min_events, 2):
            continue
        try:
            result = burstiness(interevent_times(timestamps), owner=owner, kind=kind)
        except DegenerateSeries:
            logger.debug("skipping degenerate %s series of %s", kind.value, owner)
            summary.n_degenerate_skipped += 1
            continue
        summary.results[owner] = result
    summary.histogram.extend(r.b for r in summary.results.values())
    logger.info(
        "burstiness %s: %d qualifying (>= %d events), %d degenerate",
        kind.value,
        len(summary.results),
        min_events,
        summary.n_degenerate_skipped,
    )
    return summary


def _by_author(records: Iterable[Tuple[str, int]]) -> Dict[str, List[int]]:
    series: Dict[str, List[int]] = defaultdict(list)
    for author, ts in records:
        if not is_deleted_author(author):
            series[author].append(ts)
    return series


def author_posting_burstiness(corpus: Corpus, min_posts: Optional[int] = None) -> BurstinessSummary:
    min_posts = settings.BURST_MIN_AUTHOR_POSTS if min_posts is None else min_posts
    series = _by_author((p.author, p.created_utc) for p in corpus.posts.values())
    return summarize_series(series, EventKind.POSTING, min_posts)


def author_commenting_burstiness(
    corpus: Corpus, min_comments: Optional[int] = None
) -> BurstinessSummary:
    min_comments = settings.BURST_MIN_AUTHOR_COMMENTS if min_comments is None else min_comments
    series = _by_author((c.author, c.created_utc) for c in corpus.comments.values())
    return summarize_series(series, EventKind.COMMENTING, min_comments)


def post_comment_burstiness(
    corpus: Corpus, min_comments: Optional[int] = None
) -> BurstinessSummary:
    """Every comment on the post counts as an event, whoever wrote it."""
    min_comments = settings.BURST_MIN_POST_COMMENTS if min_comments is None else min_comments
    series = {
        post_id: [c.created_utc for c in comments]
        for post_id, comments in corpus.comments_by_post.items()
    }
    return summarize_series(series, EventKind.POST_COMMENTS, min_comments)
