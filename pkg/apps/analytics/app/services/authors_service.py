"""Author categories, the commenter -> post-author interaction graph and
interaction scores.

A (effective comments received) is an author's in-degree in the graph and
B (comments made on others' posts) the out-degree. The deleted marker is
never a node.
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Dict, Iterable, List, Optional, Tuple

from app.core.config import settings
from app.metrics.histogram import ScoreHistogram
from app.schemas.pydantic.reports import AuthorCategoryCounts, AuthorSummary
from app.text.markers import is_deleted_author
from .exceptions import NoPosts, UndefinedInteractionScore

if TYPE_CHECKING:
    from .ingest_service import Corpus

logger = logging.getLogger(__name__)

AUTHORS_CSV_HEADER = (
    "author",
    "n_posts",
    "n_comments_made",
    "A",
    "B",
    "score",
    "category",
    "avg_effective_per_post",
)
EDGES_CSV_HEADER = ("src", "dst", "weight")


class AuthorCategory(str, Enum):
    PRODUCER_ONLY = "ProducerOnly"
    CONSUMER_ONLY = "ConsumerOnly"
    BOTH = "Both"


class PerPostClass(str, Enum):
    LESS_THAN_ONE = "LessThanOnePerPost"
    EXACTLY_ONE = "ExactlyOnePerPost"
    MORE_THAN_ONE = "MoreThanOnePerPost"


@dataclass(frozen=True)
class AuthorProfile:
    author: str
    n_posts: int = 0
    n_comments_made: int = 0
    n_effective_comments_received: int = 0
    n_comments_on_others: int = 0

    @property
    def category(self) -> AuthorCategory:
        if self.n_posts and self.n_comments_made:
            return AuthorCategory.BOTH
        if self.n_posts:
            return AuthorCategory.PRODUCER_ONLY
        return AuthorCategory.CONSUMER_ONLY


def interaction_score(profile: AuthorProfile) -> float:
    a = profile.n_effective_comments_received
    b = profile.n_comments_on_others
    if a + b == 0:
        raise UndefinedInteractionScore(profile.author)
    return a / (a + b)


def effective_comments_per_post(profile: AuthorProfile) -> Tuple[float, PerPostClass]:
    if profile.n_posts <= 0:
        raise NoPosts(profile.author)
    a = profile.n_effective_comments_received
    # integer comparison keeps the "exactly one" class free of float noise
    if a < profile.n_posts:
        cls = PerPostClass.LESS_THAN_ONE
    elif a == profile.n_posts:
        cls = PerPostClass.EXACTLY_ONE
    else:
        cls = PerPostClass.MORE_THAN_ONE
    return a / profile.n_posts, cls


@dataclass
class InteractionGraph:
    edges: Counter[Tuple[str, str]] = field(default_factory=Counter)

    @property
    def out_degree(self) -> Counter[str]:
        out: Counter[str] = Counter()
        for (src, _), weight in self.edges.items():
            out[src] += weight
        return out

    @property
    def in_degree(self) -> Counter[str]:
        deg: Counter[str] = Counter()
        for (_, dst), weight in self.edges.items():
            deg[dst] += weight
        return deg

    @property
    def nodes(self) -> List[str]:
        return sorted({n for edge in self.edges for n in edge})

    @property
    def total_weight(self) -> int:
        return sum(self.edges.values())

    def merge(self, other: "InteractionGraph") -> "InteractionGraph":
        edges = Counter(self.edges)
        edges.update(other.edges)
        return InteractionGraph(edges)

    def rows(self) -> List[Tuple[str, str, int]]:
        return [(src, dst, w) for (src, dst), w in sorted(self.edges.items())]


def build_interaction_graph(corpus: Corpus) -> InteractionGraph:
    graph = InteractionGraph()
    for comment in corpus.comments.values():
        post_author = corpus.posts[comment.link_id].author
        if is_deleted_author(comment.author) or is_deleted_author(post_author):
            continue
        if comment.author == post_author:
            continue
        graph.edges[(comment.author, post_author)] += 1
    logger.info("interaction graph: %d edges, weight %d", len(graph.edges), graph.total_weight)
    return graph


def build_profiles(
    corpus: Corpus, graph: Optional[InteractionGraph] = None
) -> Dict[str, AuthorProfile]:
    graph = graph or build_interaction_graph(corpus)
    posts = Counter(p.author for p in corpus.posts.values() if not is_deleted_author(p.author))
    comments = Counter(
        c.author for c in corpus.comments.values() if not is_deleted_author(c.author)
    )
    received = graph.in_degree
    made_on_others = graph.out_degree
    return {
        author: AuthorProfile(
            author=author,
            n_posts=posts[author],
            n_comments_made=comments[author],
            n_effective_comments_received=received[author],
            n_comments_on_others=made_on_others[author],
        )
        for author in sorted(posts.keys() | comments.keys())
    }


def author_categories(corpus: Corpus) -> AuthorCategoryCounts:
    return categorize(build_profiles(corpus).values())


def categorize(profiles: Iterable[AuthorProfile]) -> AuthorCategoryCounts:
    by_category = Counter(p.category for p in profiles)
    return AuthorCategoryCounts(
        producers_only=by_category[AuthorCategory.PRODUCER_ONLY],
        consumers_only=by_category[AuthorCategory.CONSUMER_ONLY],
        both=by_category[AuthorCategory.BOTH],
        total_active=sum(by_category.values()),
    )


def author_row(profile: AuthorProfile) -> Tuple[object, ...]:
    try:
        score: Optional[float] = interaction_score(profile)
    except UndefinedInteractionScore:
        score = None
    avg = effective_comments_per_post(profile)[0] if profile.n_posts else None
    return (
        profile.author,
        profile.n_posts,
        profile.n_comments_made,
        profile.n_effective_comments_received,
        profile.n_comments_on_others,
        score,
        profile.category.value,
        avg,
    )


def author_summary(
    profiles: Dict[str, AuthorProfile], graph: InteractionGraph
) -> Tuple[AuthorSummary, ScoreHistogram]:
    per_post = Counter(
        effective_comments_per_post(p)[1] for p in profiles.values() if p.n_posts > 0
    )
    scores: List[float] = []
    for profile in profiles.values():
        try:
            scores.append(interaction_score(profile))
        except UndefinedInteractionScore:
            continue
    hist = ScoreHistogram(0.0, 1.0, settings.SCORE_HISTOGRAM_BINS).extend(scores)
    summary = AuthorSummary(
        categories=categorize(profiles.values()),
        n_with_posts=sum(per_post.values()),
        less_than_one_per_post=per_post[PerPostClass.LESS_THAN_ONE],
        exactly_one_per_post=per_post[PerPostClass.EXACTLY_ONE],
        more_than_one_per_post=per_post[PerPostClass.MORE_THAN_ONE],
        n_scored_authors=len(scores),
        interaction_score_zero=sum(1 for s in scores if s == 0.0),
        interaction_score_half=sum(1 for s in scores if s == 0.5),
        interaction_score_one=sum(1 for s in scores if s == 1.0),
        graph_edges=len(graph.edges),
        graph_total_weight=graph.total_weight,
    )
    return summary, hist
