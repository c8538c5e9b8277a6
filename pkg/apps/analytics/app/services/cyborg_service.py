"""First-comment heuristic for cyborg-like posts and their success counts."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Dict, List, Optional, Sequence, Tuple

from app.core.config import settings
from app.metrics.histogram import BinSpec, Histogram
from app.schemas.pydantic.records import CommentRecord, PostRecord
from app.schemas.pydantic.reports import CyborgReport
from app.text.markers import char_count, contains_link, is_deleted_author
from .lifecycle_service import default_age_spec, post_age

if TYPE_CHECKING:
    from .ingest_service import Corpus

logger = logging.getLogger(__name__)

CYBORG_CSV_HEADER = (
    "post_id",
    "latency",
    "same_author",
    "chars",
    "has_link",
    "cyborg_like",
    "successful",
    "post_age",
)
FAST_AGE_GROUPS = (
    "cyborg",
    "cyborg_successful",
    "cyborg_unsuccessful",
    "non_cyborg",
    "non_cyborg_successful",
    "non_cyborg_unsuccessful",
)


@dataclass(frozen=True)
class CyborgVerdict:
    post_id: str
    first_comment_latency: Optional[int]
    first_comment_author: Optional[str]
    same_author: bool
    chars: int
    long_first_comment: bool
    contains_link: bool
    is_cyborg_like: bool
    is_successful: bool
    post_age: Optional[int] = None

    def csv_row(self) -> Tuple[object, ...]:
        return (
            self.post_id,
            self.first_comment_latency,
            self.same_author,
            self.chars,
            self.contains_link,
            self.is_cyborg_like,
            self.is_successful,
            self.post_age,
        )

    def age_groups(self) -> Tuple[str, str]:
        side = "cyborg" if self.is_cyborg_like else "non_cyborg"
        return side, f"{side}_successful" if self.is_successful else f"{side}_unsuccessful"


def first_comment(comments: Sequence[CommentRecord]) -> Optional[CommentRecord]:
    """Earliest comment; equal timestamps resolve to the smaller id."""
    if not comments:
        return None
    return min(comments, key=lambda c: (c.created_utc, c.name))


def first_comment_latency(post: PostRecord, comments: Sequence[CommentRecord]) -> Optional[int]:
    first = first_comment(comments)
    if first is None:
        return None
    return max(0, first.created_utc - post.created_utc)


def is_successful(post: PostRecord, comments: Sequence[CommentRecord]) -> bool:
    """Any comment from someone else, or a score moved off the author's own vote."""
    if post.score != settings.DEFAULT_SCORE:
        return True
    return any(c.author != post.author for c in comments)


def is_cyborg_like(
    post: PostRecord,
    comments: Sequence[CommentRecord],
    latency_max: Optional[int] = None,
    min_chars: Optional[int] = None,
) -> CyborgVerdict:
    latency_max = settings.CYBORG_LATENCY_MAX_SECONDS if latency_max is None else latency_max
    min_chars = settings.CYBORG_MIN_CHARS if min_chars is None else min_chars

    first = first_comment(comments)
    latency = first_comment_latency(post, comments)
    if first is None:
        same, chars, link = False, 0, False
    else:
        same = first.author == post.author and not is_deleted_author(post.author)
        chars = char_count(first.body)
        link = contains_link(first.body)
    long_comment = chars > min_chars
    cyborg = latency is not None and latency <= latency_max and same and long_comment and not link
    return CyborgVerdict(
        post_id=post.name,
        first_comment_latency=latency,
        first_comment_author=first.author if first else None,
        same_author=same,
        chars=chars,
        long_first_comment=long_comment,
        contains_link=link,
        is_cyborg_like=cyborg,
        is_successful=is_successful(post, comments),
        post_age=post_age(post, comments),
    )


def _tally(verdict: CyborgVerdict) -> CyborgReport:
    ok = verdict.is_successful
    counts = {
        "posts_first_comment_within_6s": 1,
        "automoderator_first_comments": int(
            verdict.first_comment_author == settings.AUTOMODERATOR_AUTHOR
        ),
    }
    if verdict.same_author:
        counts["posts_same_author_first_comment"] = 1
        if verdict.is_cyborg_like:
            counts["cyborg_like_posts"] = 1
            counts["successful_cyborg" if ok else "unsuccessful_cyborg"] = 1
        else:
            counts["successful_non_cyborg" if ok else "unsuccessful_non_cyborg"] = 1
    else:
        counts["successful_other_author" if ok else "unsuccessful_other_author"] = 1
    return CyborgReport(**counts)


def cyborg_report(
    corpus: Corpus,
    latency_max: Optional[int] = None,
    min_chars: Optional[int] = None,
) -> Tuple[CyborgReport, List[CyborgVerdict]]:
    """Counts over posts whose first comment lands within `latency_max`
    seconds, plus the verdict of each of those posts."""
    latency_max = settings.CYBORG_LATENCY_MAX_SECONDS if latency_max is None else latency_max
    report = CyborgReport()
    fast: List[CyborgVerdict] = []
    for post_id, post in sorted(corpus.posts.items()):
        verdict = is_cyborg_like(post, corpus.comments_for(post_id), latency_max, min_chars)
        if verdict.first_comment_latency is None or verdict.first_comment_latency > latency_max:
            continue
        fast.append(verdict)
        report = report + _tally(verdict)
    logger.info(
        "cyborg: %d fast posts, %d cyborg-like",
        report.posts_first_comment_within_6s,
        report.cyborg_like_posts,
    )
    return report, fast


def fast_post_age_histograms(
    verdicts: Sequence[CyborgVerdict], spec: Optional[BinSpec] = None
) -> Dict[str, Histogram]:
    """Post-age histograms of fast posts, split cyborg-like vs not and each
    side again by success."""
    spec = spec or default_age_spec()
    hists = {group: Histogram(spec) for group in FAST_AGE_GROUPS}
    for verdict in verdicts:
        if verdict.post_age is None:
            continue
        for group in verdict.age_groups():
            hists[group].add(verdict.post_age)
    return hists
