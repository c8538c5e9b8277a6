"""Post age, Mayfly statistics and popular-post lifecycle classes."""
from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Dict, List, MutableMapping, Optional, Sequence, Tuple

import numpy as np

from app.core.config import settings
from app.metrics.histogram import BinSpec, Histogram, LogBinSpec
from app.schemas.pydantic.records import CommentRecord, PostRecord
from app.schemas.pydantic.reports import LifecycleCounts, MayflyReport, OneCommentAgeReport
from .exceptions import BelowThreshold, InvalidConfig

if TYPE_CHECKING:
    from .ingest_service import Corpus

logger = logging.getLogger(__name__)

CLOCK_SKEW = "clock_skew"


class EvolutionClass(str, Enum):
    EARLY_BLOOMER = "EarlyBloomer"
    STEADY = "Steady"
    LATE_BLOOMER = "LateBloomer"


@dataclass(frozen=True)
class Evolution:
    post_id: str
    total_comments: int
    t75_seconds: int
    evolution_class: EvolutionClass

    def csv_row(self) -> Tuple[object, ...]:
        return self.post_id, self.total_comments, self.t75_seconds, self.evolution_class.value


LIFECYCLE_CSV_HEADER = ("post_id", "total_comments", "t75_seconds", "class")


def _elapsed(post: PostRecord, comments: Sequence[CommentRecord]) -> List[int]:
    return sorted(max(0, c.created_utc - post.created_utc) for c in comments)


def post_age(
    post: PostRecord,
    comments: Sequence[CommentRecord],
    counters: Optional[MutableMapping[str, int]] = None,
) -> Optional[int]:
    """Seconds from post creation to its last comment; None without comments.

    Negative ages (comment clock ahead of the post) clamp to 0 and bump
    ``counters["clock_skew"]`` when a counter map is given.
    """
    if not comments:
        return None
    age = max(c.created_utc for c in comments) - post.created_utc
    if age < 0:
        if counters is not None:
            counters[CLOCK_SKEW] = counters.get(CLOCK_SKEW, 0) + 1
        return 0
    return age


def corpus_ages(corpus: Corpus) -> Tuple[Dict[str, int], int]:
    """Ages of all aged posts plus the number of clamped skews."""
    counters: Counter[str] = Counter()
    ages: Dict[str, int] = {}
    for post_id, post in sorted(corpus.posts.items()):
        age = post_age(post, corpus.comments_for(post_id), counters)
        if age is not None:
            ages[post_id] = age
    return ages, counters[CLOCK_SKEW]


def mayfly_report(corpus: Corpus, threshold: Optional[int] = None) -> MayflyReport:
    threshold = settings.MAYFLY_THRESHOLD_SECONDS if threshold is None else threshold
    ages, skew = corpus_ages(corpus)
    report = MayflyReport(
        threshold_seconds=threshold,
        n_posts=len(corpus.posts),
        n_aged_posts=len(ages),
        n_within_threshold=sum(1 for a in ages.values() if a <= threshold),
        clock_skew_clamped=skew,
    )
    logger.info(
        "mayfly: %d of %d aged posts die within %ds",
        report.n_within_threshold,
        report.n_aged_posts,
        threshold,
    )
    return report


def mayfly_fraction(corpus: Corpus, threshold: Optional[int] = None) -> Optional[float]:
    """Fraction of aged posts whose age is at most `threshold`; None if no post is aged."""
    return mayfly_report(corpus, threshold).fraction_of_aged_posts


def default_age_spec(bins_per_decade: Optional[int] = None) -> LogBinSpec:
    return LogBinSpec(bins_per_decade or settings.AGE_BINS_PER_DECADE)


def age_histogram(corpus: Corpus, spec: Optional[BinSpec] = None) -> Histogram:
    ages, _ = corpus_ages(corpus)
    return Histogram(spec or default_age_spec()).extend(ages.values())


def one_comment_ages(
    corpus: Corpus,
    threshold: Optional[int] = None,
    spec: Optional[BinSpec] = None,
) -> Tuple[OneCommentAgeReport, Histogram]:
    threshold = settings.ONE_COMMENT_QUICK_AGE_SECONDS if threshold is None else threshold
    hist = Histogram(spec or default_age_spec())
    within = 0
    n = 0
    for post_id, post in sorted(corpus.posts.items()):
        comments = corpus.comments_for(post_id)
        if len(comments) != 1:
            continue
        age = post_age(post, comments)
        assert age is not None
        n += 1
        within += age <= threshold
        hist.add(age)
    report = OneCommentAgeReport(
        threshold_seconds=threshold, n_one_comment_posts=n, n_within_threshold=within
    )
    return report, hist


def comments_vs_age(
    corpus: Corpus, spec: Optional[BinSpec] = None
) -> List[Tuple[float, float, int, float]]:
    """Mean final comment count of aged posts per age bin: (bin_lo, bin_hi, n_posts, mean_comments)."""
    spec = spec or default_age_spec()
    ages, _ = corpus_ages(corpus)
    n_posts: Counter[int] = Counter()
    n_comments: Counter[int] = Counter()
    for post_id, age in ages.items():
        idx = spec.index(age)
        n_posts[idx] += 1
        n_comments[idx] += len(corpus.comments_for(post_id))
    rows = []
    for idx in sorted(n_posts):
        lo, hi = spec.edges(idx)
        rows.append((lo, hi, n_posts[idx], n_comments[idx] / n_posts[idx]))
    return rows


def _check_fraction(p: float) -> None:
    if not 0 < p <= 1:
        raise InvalidConfig(f"lifecycle fraction must be in (0, 1], got {p}")


def time_to_fraction(post: PostRecord, comments: Sequence[CommentRecord], p: float) -> int:
    """Earliest elapsed time at which ceil(p * total) comments exist."""
    _check_fraction(p)
    elapsed = _elapsed(post, comments)
    if not elapsed:
        raise BelowThreshold(post.name, 0, ">= 1 comment")
    # round first so 0.75 * 600 does not become 450.00000000000006
    k = max(1, math.ceil(round(p * len(elapsed), 9)))
    return elapsed[k - 1]


def classify_evolution(
    post: PostRecord,
    comments: Sequence[CommentRecord],
    p: Optional[float] = None,
    t_early: Optional[int] = None,
    t_late: Optional[int] = None,
    min_comments: Optional[int] = None,
) -> Evolution:
    p = settings.LIFECYCLE_FRACTION if p is None else p
    t_early = settings.LIFECYCLE_EARLY_SECONDS if t_early is None else t_early
    t_late = settings.LIFECYCLE_LATE_SECONDS if t_late is None else t_late
    min_comments = settings.POPULAR_MIN_COMMENTS if min_comments is None else min_comments

    if len(comments) < min_comments:
        raise BelowThreshold(post.name, len(comments), f">= {min_comments} comments")
    t75 = time_to_fraction(post, comments, p)
    if t75 <= t_early:
        cls = EvolutionClass.EARLY_BLOOMER
    elif t75 > t_late:
        cls = EvolutionClass.LATE_BLOOMER
    else:
        cls = EvolutionClass.STEADY
    return Evolution(post.name, len(comments), t75, cls)


def classify_popular_posts(
    corpus: Corpus,
    p: Optional[float] = None,
    t_early: Optional[int] = None,
    t_late: Optional[int] = None,
    min_comments: Optional[int] = None,
) -> Tuple[List[Evolution], LifecycleCounts]:
    min_comments = settings.POPULAR_MIN_COMMENTS if min_comments is None else min_comments
    rows: List[Evolution] = []
    for post_id, post in sorted(corpus.posts.items()):
        comments = corpus.comments_for(post_id)
        if len(comments) >= min_comments:
            rows.append(classify_evolution(post, comments, p, t_early, t_late, min_comments))
    by_class = Counter(r.evolution_class for r in rows)
    counts = LifecycleCounts(
        min_comments=min_comments,
        early_bloomers=by_class[EvolutionClass.EARLY_BLOOMER],
        steady=by_class[EvolutionClass.STEADY],
        late_bloomers=by_class[EvolutionClass.LATE_BLOOMER],
    )
    logger.info("classified %d popular posts: %s", len(rows), counts.model_dump())
    return rows, counts


def growth_curve(
    post: PostRecord,
    comments: Sequence[CommentRecord],
    points_per_decade: Optional[int] = None,
) -> List[Tuple[int, float]]:
    """Cumulative comment fraction at log-spaced whole-second elapsed times,
    from 1 s until every comment is counted."""
    ppd = points_per_decade or settings.GROWTH_CURVE_POINTS_PER_DECADE
    elapsed = np.asarray(_elapsed(post, comments), dtype=np.int64)
    if elapsed.size == 0:
        return []
    last = max(1, int(elapsed[-1]))
    n_points = math.ceil(ppd * math.log10(last) + 1e-9) + 1
    grid = np.unique(np.rint(np.logspace(0, (n_points - 1) / ppd, n_points)).astype(np.int64))
    grid = grid[grid < last]
    grid = np.append(grid, last)
    reached = np.searchsorted(elapsed, grid, side="right")
    return [(int(t), int(r) / elapsed.size) for t, r in zip(grid, reached)]


def growth_curves(
    corpus: Corpus,
    min_comments: Optional[int] = None,
    points_per_decade: Optional[int] = None,
) -> List[Tuple[str, int, float]]:
    min_comments = settings.POPULAR_MIN_COMMENTS if min_comments is None else min_comments
    rows: List[Tuple[str, int, float]] = []
    for post_id, post in sorted(corpus.posts.items()):
        comments = corpus.comments_for(post_id)
        if len(comments) >= min_comments:
            rows.extend((post_id, t, f) for t, f in growth_curve(post, comments, points_per_decade))
    return rows
