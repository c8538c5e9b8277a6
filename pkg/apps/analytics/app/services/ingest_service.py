"""Dump ingestion: parse NDJSON rows, window and link them into a Corpus.

Parsing is shardable. Each shard produces a ``CorpusBuilder`` (a mergeable
partial state keyed by record id with the global input sequence number of
every record); merging keeps the earliest occurrence of a duplicate id, so
the final Corpus is independent of how lines were split between shards.
"""
from __future__ import annotations

import gzip
import io
import logging
import sys
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import reduce
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, Iterator, List, NoReturn, Sequence, Tuple

import zstandard
from pydantic import ValidationError
from tqdm import tqdm

from app.core.config import settings
from app.schemas.pydantic.records import (
    POST_PREFIX,
    AnalysisWindow,
    CommentRecord,
    PostRecord,
)
from app.schemas.pydantic.reports import BasicStats, IngestDiagnostics
from app.text.markers import is_removed_body
from .exceptions import (
    BadPrefix,
    InvalidField,
    MalformedJson,
    MissingField,
    RecordParseError,
)

logger = logging.getLogger(__name__)

_MALFORMED_TYPES = frozenset({"json_invalid", "json_type", "model_type", "model_attributes_type"})
_ZST_WINDOW = 2**31


# ──────────────────────────────────────────────────────────────────────────────
# Line parsers
# ──────────────────────────────────────────────────────────────────────────────
def _raise_parse_error(exc: ValidationError) -> NoReturn:
    errors = exc.errors(include_url=False)
    for err in errors:
        if err["type"] in _MALFORMED_TYPES:
            raise MalformedJson(err["msg"]) from exc
    for err in errors:
        if err["type"] == "missing":
            raise MissingField(field=str(err["loc"][0])) from exc
    for err in errors:
        if err["type"] == "bad_prefix":
            raise BadPrefix(field=str(err["loc"][0])) from exc
    first = errors[0]
    loc = str(first["loc"][0]) if first["loc"] else None
    raise InvalidField(field=loc, message=f"{loc}: {first['msg']}") from exc


def parse_post_line(line: str) -> PostRecord:
    try:
        return PostRecord.model_validate_json(line)
    except ValidationError as exc:
        _raise_parse_error(exc)


def parse_comment_line(line: str) -> CommentRecord:
    try:
        return CommentRecord.model_validate_json(line)
    except ValidationError as exc:
        _raise_parse_error(exc)


# ──────────────────────────────────────────────────────────────────────────────
# Readers
# ──────────────────────────────────────────────────────────────────────────────
def _open_text(path: Path) -> io.TextIOBase:
    suffix = path.suffix.lower()
    if suffix == ".zst":
        raw = path.open("rb")
        reader = zstandard.ZstdDecompressor(max_window_size=_ZST_WINDOW).stream_reader(raw)
        return io.TextIOWrapper(reader, encoding="utf-8", errors="replace")
    if suffix == ".gz":
        return gzip.open(path, "rt", encoding="utf-8", errors="replace")  # type: ignore[return-value]
    return path.open("r", encoding="utf-8", errors="replace")


def read_dump_lines(paths: Sequence[Path], show_progress: bool | None = None) -> Iterator[str]:
    """Yield non-blank lines of every file in argument order."""
    if show_progress is None:
        show_progress = settings.SHOW_PROGRESS and sys.stderr.isatty()
    for path in paths:
        path = Path(path)
        logger.info("reading %s", path)
        with _open_text(path) as fh:
            for line in tqdm(fh, desc=path.name, unit=" lines", disable=not show_progress):
                line = line.strip()
                if line:
                    yield line


# ──────────────────────────────────────────────────────────────────────────────
# Corpus
# ──────────────────────────────────────────────────────────────────────────────
@dataclass
class Corpus:
    window: AnalysisWindow
    posts: Dict[str, PostRecord]
    comments: Dict[str, CommentRecord]
    orphan_comments: FrozenSet[str]
    disconnected_post_count: int
    removed_comment_count: int
    n_comments_in_window: int
    diagnostics: IngestDiagnostics
    comments_by_post: Dict[str, List[CommentRecord]] = field(default_factory=dict)

    def comments_for(self, post_id: str) -> List[CommentRecord]:
        """Comments of a post ordered by (created_utc, name)."""
        return self.comments_by_post.get(post_id, [])


def _comment_order(comment: CommentRecord) -> Tuple[int, str]:
    return comment.created_utc, comment.name


@dataclass
class CorpusBuilder:
    """Mergeable partial ingestion state."""

    posts: Dict[str, Tuple[int, PostRecord]] = field(default_factory=dict)
    comments: Dict[str, Tuple[int, CommentRecord]] = field(default_factory=dict)
    skipped: Counter[str] = field(default_factory=Counter)
    first_skipped_line: Dict[str, int] = field(default_factory=dict)
    duplicate_posts: int = 0
    duplicate_comments: int = 0

    def _skip(self, kind: str, seq: int, exc: RecordParseError) -> None:
        self.skipped[kind] += 1
        self.skipped[exc.code] += 1
        if kind not in self.first_skipped_line or seq < self.first_skipped_line[kind]:
            self.first_skipped_line[kind] = seq
        logger.debug("skipping %s line %d: %s", kind, seq, exc)

    def add_post(self, record: PostRecord, seq: int) -> None:
        existing = self.posts.get(record.name)
        if existing is not None:
            self.duplicate_posts += 1
            if existing[0] <= seq:
                return
        self.posts[record.name] = (seq, record)

    def add_comment(self, record: CommentRecord, seq: int) -> None:
        existing = self.comments.get(record.name)
        if existing is not None:
            self.duplicate_comments += 1
            if existing[0] <= seq:
                return
        self.comments[record.name] = (seq, record)

    def add_post_line(self, line: str, seq: int) -> None:
        try:
            self.add_post(parse_post_line(line), seq)
        except RecordParseError as exc:
            self._skip("posts", seq, exc)

    def add_comment_line(self, line: str, seq: int) -> None:
        try:
            self.add_comment(parse_comment_line(line), seq)
        except RecordParseError as exc:
            self._skip("comments", seq, exc)

    def merge(self, other: "CorpusBuilder") -> "CorpusBuilder":
        merged = CorpusBuilder(
            posts=dict(self.posts),
            comments=dict(self.comments),
            skipped=self.skipped + other.skipped,
            first_skipped_line=dict(self.first_skipped_line),
            duplicate_posts=self.duplicate_posts + other.duplicate_posts,
            duplicate_comments=self.duplicate_comments + other.duplicate_comments,
        )
        for kind, seq in other.first_skipped_line.items():
            merged.first_skipped_line[kind] = min(seq, merged.first_skipped_line.get(kind, seq))
        for seq, post in other.posts.values():
            merged.add_post(post, seq)
        for seq, comment in other.comments.values():
            merged.add_comment(comment, seq)
        return merged

    def build(self, window: AnalysisWindow) -> Corpus:
        posts: Dict[str, PostRecord] = {}
        posts_outside = 0
        for post_id in sorted(self.posts):
            post = self.posts[post_id][1]
            if window.contains(post.created_utc):
                posts[post_id] = post
            else:
                posts_outside += 1

        comments: Dict[str, CommentRecord] = {}
        comments_outside = 0
        off_period = 0
        n_in_window = 0
        unknown_links: set[str] = set()
        for comment_id in sorted(self.comments):
            comment = self.comments[comment_id][1]
            if not window.contains(comment.created_utc):
                comments_outside += 1
                continue
            n_in_window += 1
            if comment.link_id in posts:
                comments[comment_id] = comment
            else:
                off_period += 1
                if comment.link_id not in self.posts:
                    unknown_links.add(comment.link_id)

        by_post: Dict[str, List[CommentRecord]] = defaultdict(list)
        orphans: set[str] = set()
        removed = 0
        for comment in comments.values():
            by_post[comment.link_id].append(comment)
            if is_removed_body(comment.body):
                removed += 1
            parent = comment.parent_id
            if parent.startswith(POST_PREFIX):
                if parent != comment.link_id:
                    orphans.add(comment.name)
            else:
                parent_comment = comments.get(parent)
                if parent_comment is None or parent_comment.link_id != comment.link_id:
                    orphans.add(comment.name)
        for bucket in by_post.values():
            bucket.sort(key=_comment_order)

        mismatch = sum(
            1 for post_id, post in posts.items() if post.num_comments != len(by_post.get(post_id, ()))
        )
        diagnostics = IngestDiagnostics(
            malformed_posts=self.skipped["posts"],
            malformed_comments=self.skipped["comments"],
            malformed_json=self.skipped[MalformedJson.code],
            missing_field=self.skipped[MissingField.code],
            bad_prefix=self.skipped[BadPrefix.code],
            invalid_field=self.skipped[InvalidField.code],
            duplicate_posts=self.duplicate_posts,
            duplicate_comments=self.duplicate_comments,
            posts_outside_window=posts_outside,
            comments_outside_window=comments_outside,
            comments_on_off_period_posts=off_period,
            orphan_comments=len(orphans),
            num_comments_mismatch=mismatch,
        )
        for kind, seq in sorted(self.first_skipped_line.items()):
            logger.warning(
                "skipped %d malformed %s lines (first at line %d)", self.skipped[kind], kind, seq + 1
            )
        logger.info(
            "corpus built: %d posts, %d comments (%d orphan, %d on off-period posts)",
            len(posts),
            len(comments),
            len(orphans),
            off_period,
        )
        return Corpus(
            window=window,
            posts=posts,
            comments=comments,
            orphan_comments=frozenset(orphans),
            disconnected_post_count=len(unknown_links),
            removed_comment_count=removed,
            n_comments_in_window=n_in_window,
            diagnostics=diagnostics,
            comments_by_post=dict(sorted(by_post.items())),
        )


def build_corpus(
    posts: Iterable[PostRecord],
    comments: Iterable[CommentRecord],
    window: AnalysisWindow,
) -> Corpus:
    """Window and link already-parsed records; input order only decides which
    copy of a duplicate id is kept."""
    builder = CorpusBuilder()
    for seq, post in enumerate(posts):
        builder.add_post(post, seq)
    for seq, comment in enumerate(comments):
        builder.add_comment(comment, seq)
    return builder.build(window)


# ──────────────────────────────────────────────────────────────────────────────
# Sharded parsing
# ──────────────────────────────────────────────────────────────────────────────
_ShardTask = Tuple[str, int, List[str]]


def _parse_shard(task: _ShardTask) -> CorpusBuilder:
    kind, base_seq, lines = task
    builder = CorpusBuilder()
    add = builder.add_post_line if kind == "posts" else builder.add_comment_line
    for offset, line in enumerate(lines):
        add(line, base_seq + offset)
    return builder


def _split(kind: str, lines: List[str], shards: int) -> List[_ShardTask]:
    size = max(1, -(-len(lines) // shards))
    return [(kind, start, lines[start : start + size]) for start in range(0, len(lines), size)]


def parse_lines(post_lines: List[str], comment_lines: List[str], shards: int = 1) -> CorpusBuilder:
    if shards < 1:
        raise ValueError(f"shards must be >= 1, got {shards}")
    tasks = _split("posts", post_lines, shards) + _split("comments", comment_lines, shards)
    if shards == 1 or len(tasks) <= 1:
        partials = [_parse_shard(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=shards) as pool:
            partials = list(pool.map(_parse_shard, tasks))
    return reduce(CorpusBuilder.merge, partials, CorpusBuilder())


def ingest_files(
    post_paths: Sequence[Path],
    comment_paths: Sequence[Path],
    window: AnalysisWindow,
    shards: int = 1,
    show_progress: bool | None = None,
) -> Corpus:
    post_lines = list(read_dump_lines(post_paths, show_progress))
    comment_lines = list(read_dump_lines(comment_paths, show_progress))
    logger.info(
        "parsing %d post lines and %d comment lines on %d shard(s)",
        len(post_lines),
        len(comment_lines),
        shards,
    )
    return parse_lines(post_lines, comment_lines, shards).build(window)


# ──────────────────────────────────────────────────────────────────────────────
# Basic statistics
# ──────────────────────────────────────────────────────────────────────────────
def corpus_stats(corpus: Corpus) -> BasicStats:
    zero = one = deleted = 0
    for post_id, post in corpus.posts.items():
        n = len(corpus.comments_for(post_id))
        if n == 0:
            zero += 1
        elif n == 1:
            one += 1
        if post.is_deleted_author:
            deleted += 1
    return BasicStats(
        n_posts=len(corpus.posts),
        n_deleted_author_posts=deleted,
        n_zero_comment_posts=zero,
        n_one_comment_posts=one,
        n_comments=corpus.n_comments_in_window,
        n_comments_on_period_posts=len(corpus.comments),
        n_disconnected_posts=corpus.disconnected_post_count,
        n_removed_comments=corpus.removed_comment_count,
    )
