"""Deletion-based controversiality at post, subreddit and author level."""
from __future__ import annotations

import logging
from bisect import bisect_left
from collections import Counter
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, Dict, List, Optional, Sequence, Tuple

from app.core.config import settings
from app.schemas.pydantic.records import CommentRecord, PostRecord
from app.text.markers import is_deleted_author, is_deleted_body
from .exceptions import BelowThreshold, NoComments, ZeroPosts

if TYPE_CHECKING:
    from .ingest_service import Corpus

logger = logging.getLogger(__name__)

SCATTER_CSV_HEADER = (
    "post_id",
    "n_unique_authors",
    "post_score",
    "n_comments",
    "popularity_category",
)
ROLLUP_CSV_HEADER_TAIL = ("n_posts", "n_scored_posts", "n_controversial", "score")

# upper bounds (inclusive) of categories 1-4; anything larger is 5
_CATEGORY_UPPER = (10, 100, 1000, 2000)


@dataclass(frozen=True)
class PostControversy:
    post_id: str
    subreddit: str
    author: str
    n_comments: int
    n_deleted: int
    n_unique_authors: int

    @property
    def score(self) -> Optional[float]:
        return self.n_deleted / self.n_comments if self.n_comments else None

    def is_controversial(self, theta: Optional[float] = None) -> bool:
        theta = settings.CONTROVERSY_THETA if theta is None else theta
        score = self.score
        return score is not None and score > theta


def _score_post(post: PostRecord, comments: Sequence[CommentRecord]) -> PostControversy:
    return PostControversy(
        post_id=post.name,
        subreddit=post.subreddit,
        author=post.author,
        n_comments=len(comments),
        n_deleted=sum(1 for c in comments if is_deleted_body(c.body, c.author)),
        n_unique_authors=len({c.author for c in comments if not is_deleted_author(c.author)}),
    )


def post_controversiality(post: PostRecord, comments: Sequence[CommentRecord]) -> float:
    if not comments:
        raise NoComments(post.name)
    score = _score_post(post, comments).score
    assert score is not None
    return score


def is_controversial(
    post: PostRecord, comments: Sequence[CommentRecord], theta: Optional[float] = None
) -> bool:
    """Strictly above `theta`; a post with exactly theta deleted is not controversial."""
    theta = settings.CONTROVERSY_THETA if theta is None else theta
    return post_controversiality(post, comments) > theta


def subreddit_popularity_category(n_posts: int) -> int:
    if n_posts < 1:
        raise ZeroPosts()
    return bisect_left(_CATEGORY_UPPER, n_posts) + 1


def score_posts(corpus: Corpus) -> List[PostControversy]:
    return [
        _score_post(post, corpus.comments_for(post_id))
        for post_id, post in sorted(corpus.posts.items())
    ]


def _fraction(
    scored: Sequence[PostControversy],
    select: Callable[[PostControversy], bool],
    entity: str,
    min_posts: int,
    strict: bool,
    theta: Optional[float],
) -> float:
    mine = [p for p in scored if select(p) and p.score is not None]
    ok = len(mine) > min_posts if strict else len(mine) >= min_posts
    if not ok:
        raise BelowThreshold(entity, len(mine), f"{'>' if strict else '>='} {min_posts} scored posts")
    return sum(1 for p in mine if p.is_controversial(theta)) / len(mine)


def subreddit_controversiality(
    corpus: Corpus,
    subreddit: str,
    min_posts: Optional[int] = None,
    theta: Optional[float] = None,
    scored: Optional[Sequence[PostControversy]] = None,
) -> float:
    min_posts = settings.CONTROVERSY_MIN_SUBREDDIT_POSTS if min_posts is None else min_posts
    rows = score_posts(corpus) if scored is None else scored
    return _fraction(rows, lambda p: p.subreddit == subreddit, subreddit, min_posts, False, theta)


def author_controversiality(
    corpus: Corpus,
    author: str,
    min_posts: Optional[int] = None,
    theta: Optional[float] = None,
    scored: Optional[Sequence[PostControversy]] = None,
) -> float:
    """Requires strictly more than `min_posts` scored posts."""
    min_posts = settings.CONTROVERSY_MIN_AUTHOR_POSTS if min_posts is None else min_posts
    rows = score_posts(corpus) if scored is None else scored
    return _fraction(rows, lambda p: p.author == author, author, min_posts, True, theta)


def subreddit_sizes(scored: Sequence[PostControversy]) -> Counter[str]:
    return Counter(p.subreddit for p in scored)


def controversy_scatter(
    corpus: Corpus,
    min_comments: Optional[int] = None,
    scored: Optional[Sequence[PostControversy]] = None,
) -> List[Tuple[str, int, float, int, int]]:
    min_comments = settings.CONTROVERSY_MIN_COMMENTS if min_comments is None else min_comments
    rows = score_posts(corpus) if scored is None else scored
    sizes = subreddit_sizes(rows)
    out = []
    for p in sorted(rows, key=lambda r: r.post_id):
        if p.n_comments >= min_comments and p.score is not None:
            category = subreddit_popularity_category(sizes[p.subreddit])
            out.append((p.post_id, p.n_unique_authors, p.score, p.n_comments, category))
    logger.info("controversy scatter: %d posts with >= %d comments", len(out), min_comments)
    return out


def _rollup(
    scored: Sequence[PostControversy],
    key: Callable[[PostControversy], str],
    min_posts: int,
    strict: bool,
    theta: Optional[float],
) -> Dict[str, Tuple[int, int, int, Optional[float]]]:
    n_posts: Counter[str] = Counter()
    n_scored: Counter[str] = Counter()
    n_hot: Counter[str] = Counter()
    for p in scored:
        k = key(p)
        n_posts[k] += 1
        if p.score is not None:
            n_scored[k] += 1
            n_hot[k] += p.is_controversial(theta)
    table = {}
    for k in sorted(n_posts):
        ok = n_scored[k] > min_posts if strict else n_scored[k] >= min_posts
        score = n_hot[k] / n_scored[k] if ok else None
        table[k] = (n_posts[k], n_scored[k], n_hot[k], score)
    return table


def subreddit_table(
    scored: Sequence[PostControversy],
    min_posts: Optional[int] = None,
    theta: Optional[float] = None,
) -> List[Tuple[object, ...]]:
    """One row per subreddit: counts, score (blank below the threshold) and
    popularity category from all of its posts."""
    min_posts = settings.CONTROVERSY_MIN_SUBREDDIT_POSTS if min_posts is None else min_posts
    table = _rollup(scored, lambda p: p.subreddit, min_posts, False, theta)
    return [
        (name, *counts, subreddit_popularity_category(counts[0])) for name, counts in table.items()
    ]


def author_table(
    scored: Sequence[PostControversy],
    min_posts: Optional[int] = None,
    theta: Optional[float] = None,
) -> List[Tuple[object, ...]]:
    min_posts = settings.CONTROVERSY_MIN_AUTHOR_POSTS if min_posts is None else min_posts
    live = [p for p in scored if not is_deleted_author(p.author)]
    table = _rollup(live, lambda p: p.author, min_posts, True, theta)
    return [(name, *counts) for name, counts in table.items()]
