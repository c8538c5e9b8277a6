"""Discussion-tree reconstruction and structural metrics.

The post is level 0, first-level comments are level 1. Comments whose parent
chain never reaches the post (unknown parent, cross-post parent, cycle) hang
off a synthetic orphan root and are left out of every structural metric.
Parent chains are resolved iteratively, so arbitrarily deep threads are fine.
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Dict, Iterable, List, Optional, Sequence, Tuple

from app.core.config import settings
from app.metrics.histogram import ScoreHistogram
from app.schemas.pydantic.records import CommentRecord, PostRecord
from app.schemas.pydantic.reports import LimelightSummary
from app.text.markers import is_deleted_author
from .exceptions import CycleDetected, NoFirstLevelComments

if TYPE_CHECKING:
    from .ingest_service import Corpus

logger = logging.getLogger(__name__)

ORPHAN_ROOT = "<orphan-root>"


@dataclass(frozen=True)
class TreeNode:
    author: str
    created_utc: int
    parent: str


@dataclass
class DiscussionTree:
    post_id: str
    post_author: str
    nodes: Dict[str, TreeNode] = field(default_factory=dict)
    children: Dict[str, List[str]] = field(default_factory=dict)
    level: Dict[str, int] = field(default_factory=dict)
    cycles: List[CycleDetected] = field(default_factory=list)

    @property
    def first_level(self) -> List[str]:
        return self.children.get(self.post_id, [])

    @property
    def orphans(self) -> List[str]:
        return self.children.get(ORPHAN_ROOT, [])

    @property
    def n_comments(self) -> int:
        """Non-orphan comment count."""
        return len(self.level)


@dataclass(frozen=True)
class TreeMetrics:
    post_id: str
    n_comments: int
    n_orphans: int
    depth: int
    breadth: int
    n_first_level: int
    limelight_score: Optional[float]
    hog_author: Optional[str]
    hog_is_post_author: Optional[bool]

    def csv_row(self) -> Tuple[object, ...]:
        return (
            self.post_id,
            self.n_comments,
            self.depth,
            self.breadth,
            self.limelight_score,
            self.hog_author,
            self.hog_is_post_author,
        )


TREE_CSV_HEADER = (
    "post_id",
    "n_comments",
    "depth",
    "breadth",
    "limelight_score",
    "hog_author",
    "hog_is_post_author",
)


def _rotate(members: List[str]) -> List[str]:
    pivot = members.index(min(members))
    return members[pivot:] + members[:pivot]


def build_tree(
    post: PostRecord, comments: Iterable[CommentRecord], strict: bool = False
) -> DiscussionTree:
    by_id: Dict[str, CommentRecord] = {c.name: c for c in comments}
    tree = DiscussionTree(post_id=post.name, post_author=post.author)
    orphan: set[str] = set()

    for start in sorted(by_id):
        path: List[str] = []
        on_path: set[str] = set()
        cur = start
        base: Optional[int]
        while True:
            if cur in tree.level:
                base = tree.level[cur]
                break
            if cur in orphan:
                base = None
                break
            if cur in on_path:
                cycle = CycleDetected(post.name, _rotate(path[path.index(cur) :]))
                if strict:
                    raise cycle
                logger.warning("%s", cycle)
                tree.cycles.append(cycle)
                base = None
                break
            on_path.add(cur)
            path.append(cur)
            parent = by_id[cur].parent_id
            if parent == post.name:
                base = 0
                break
            if parent not in by_id:
                base = None
                break
            cur = parent
        if base is None:
            orphan.update(path)
        else:
            for offset, node_id in enumerate(reversed(path), start=1):
                tree.level[node_id] = base + offset

    for node_id, comment in by_id.items():
        parent = comment.parent_id if node_id in tree.level else ORPHAN_ROOT
        tree.nodes[node_id] = TreeNode(comment.author, comment.created_utc, parent)
        tree.children.setdefault(parent, []).append(node_id)
    for siblings in tree.children.values():
        siblings.sort(key=lambda cid: (tree.nodes[cid].created_utc, cid))
    return tree


def subtree_sizes(tree: DiscussionTree) -> Dict[str, int]:
    """Size of every non-orphan node's subtree, the node itself included."""
    sizes = {node_id: 1 for node_id in tree.level}
    for node_id in sorted(tree.level, key=tree.level.__getitem__, reverse=True):
        parent = tree.nodes[node_id].parent
        if parent != tree.post_id:
            sizes[parent] += sizes[node_id]
    return sizes


def depth(tree: DiscussionTree) -> int:
    return max(tree.level.values(), default=0)


def breadth(tree: DiscussionTree) -> int:
    return max(Counter(tree.level.values()).values(), default=0)


def _hog(tree: DiscussionTree, sizes: Dict[str, int]) -> str:
    first = tree.first_level
    if not first:
        raise NoFirstLevelComments(tree.post_id)
    return min(first, key=lambda cid: (-sizes[cid], tree.nodes[cid].created_utc, cid))


def limelight_score(tree: DiscussionTree) -> float:
    sizes = subtree_sizes(tree)
    hog = _hog(tree, sizes)
    return sizes[hog] / tree.n_comments


def hog_author(tree: DiscussionTree) -> Tuple[str, bool]:
    """Author of the largest first-level subtree and whether it is the post author.

    A deleted post author never matches.
    """
    hog = _hog(tree, subtree_sizes(tree))
    author = tree.nodes[hog].author
    return author, author == tree.post_author and not is_deleted_author(tree.post_author)


def measure_tree(tree: DiscussionTree) -> TreeMetrics:
    if tree.first_level:
        score: Optional[float] = limelight_score(tree)
        author, same = hog_author(tree)
        hog: Optional[str] = author
        hog_same: Optional[bool] = same
    else:
        score, hog, hog_same = None, None, None
    return TreeMetrics(
        post_id=tree.post_id,
        n_comments=tree.n_comments,
        n_orphans=len(tree.orphans),
        depth=depth(tree),
        breadth=breadth(tree),
        n_first_level=len(tree.first_level),
        limelight_score=score,
        hog_author=hog,
        hog_is_post_author=hog_same,
    )


def tree_metrics_for_corpus(corpus: Corpus) -> List[TreeMetrics]:
    rows = [
        measure_tree(build_tree(post, corpus.comments_for(post_id)))
        for post_id, post in sorted(corpus.posts.items())
    ]
    logger.info("measured %d discussion trees", len(rows))
    return rows


def depth_breadth_histogram(rows: Iterable[TreeMetrics]) -> List[Tuple[int, int, int]]:
    """(depth, breadth, count) over posts with at least one placed comment."""
    counts = Counter((r.depth, r.breadth) for r in rows if r.n_comments > 0)
    return [(d, b, n) for (d, b), n in sorted(counts.items())]


def limelight_summary(
    rows: Sequence[TreeMetrics],
    min_comments: Optional[int] = None,
    hog_threshold: Optional[float] = None,
    n_bins: Optional[int] = None,
) -> Tuple[LimelightSummary, ScoreHistogram]:
    min_comments = settings.POPULAR_MIN_COMMENTS if min_comments is None else min_comments
    hog_threshold = settings.LIMELIGHT_HOG_THRESHOLD if hog_threshold is None else hog_threshold
    hist = ScoreHistogram(0.0, 1.0, n_bins or settings.SCORE_HISTOGRAM_BINS)

    popular = [r for r in rows if r.n_comments >= min_comments and r.limelight_score is not None]
    hist.extend(r.limelight_score for r in popular)  # type: ignore[misc]
    summary = LimelightSummary(
        min_comments=min_comments,
        hog_threshold=hog_threshold,
        n_posts=len(popular),
        n_at_or_above_threshold=sum(1 for r in popular if r.limelight_score >= hog_threshold),  # type: ignore[operator]
        n_hog_differs_from_post_author=sum(1 for r in popular if r.hog_is_post_author is False),
        n_posts_with_orphans=sum(1 for r in popular if r.n_orphans > 0),
    )
    logger.info("limelight summary over %d popular posts", summary.n_posts)
    return summary, hist
