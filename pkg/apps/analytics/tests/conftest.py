import os
import sys
from typing import Callable, Iterable, List, Optional

import pytest

"""Shared fixtures: record factories and small hand-countable corpora.

Progress bars are switched off and the log level pinned before the app
settings are imported.
"""

os.environ.setdefault("SHOW_PROGRESS", "false")
os.environ.setdefault("ENVIRONMENT", "local")

# Ensure parent directory that contains the 'app' package is on PYTHONPATH
_THIS_DIR = os.path.dirname(__file__)
_APP_PARENT = os.path.abspath(os.path.join(_THIS_DIR, '..'))  # -> apps/analytics
if _APP_PARENT not in sys.path:
    sys.path.insert(0, _APP_PARENT)

from app.schemas.pydantic.records import AnalysisWindow, CommentRecord, PostRecord
from app.services.ingest_service import Corpus, build_corpus


def make_post(
    name: str,
    created_utc: int = 100,
    author: str = "u1",
    subreddit: str = "s",
    score: int = 1,
    num_comments: int = 0,
) -> PostRecord:
    return PostRecord(
        name=name,
        author=author,
        created_utc=created_utc,
        subreddit=subreddit,
        score=score,
        num_comments=num_comments,
        title="t",
    )


def make_comment(
    name: str,
    link_id: str,
    created_utc: int,
    parent_id: Optional[str] = None,
    author: str = "u2",
    body: str = "hi",
    subreddit: str = "s",
) -> CommentRecord:
    return CommentRecord(
        name=name,
        author=author,
        created_utc=created_utc,
        link_id=link_id,
        parent_id=parent_id or link_id,
        body=body,
        subreddit=subreddit,
        score=1,
    )


WIDE_WINDOW = AnalysisWindow(start_utc=1, end_utc=10**10)


def corpus_of(
    posts: Iterable[PostRecord],
    comments: Iterable[CommentRecord] = (),
    window: AnalysisWindow = WIDE_WINDOW,
) -> Corpus:
    return build_corpus(list(posts), list(comments), window)


@pytest.fixture
def post_factory() -> Callable[..., PostRecord]:
    return make_post


@pytest.fixture
def comment_factory() -> Callable[..., CommentRecord]:
    return make_comment


@pytest.fixture
def five_row_lines() -> tuple[List[str], List[str]]:
    """Three posts (one deleted author) with 0, 1 and 2 comments, as dump lines."""
    posts = [
        make_post("t3_a", 100, author="u1"),
        make_post("t3_b", 200, author="[deleted]"),
        make_post("t3_c", 300, author="u3", num_comments=2),
    ]
    comments = [
        make_comment("t1_1", "t3_b", 250, author="u2"),
        make_comment("t1_2", "t3_c", 310, author="u1"),
        make_comment("t1_3", "t3_c", 320, parent_id="t1_2", author="u3", body="[removed]"),
    ]
    return [p.to_json_line() for p in posts], [c.to_json_line() for c in comments]


@pytest.fixture
def dump_files(tmp_path, five_row_lines):
    post_lines, comment_lines = five_row_lines
    posts = tmp_path / "posts.jsonl"
    comments = tmp_path / "comments.jsonl"
    posts.write_text("\n".join(post_lines) + "\n", encoding="utf-8")
    comments.write_text("\n".join(comment_lines) + "\n", encoding="utf-8")
    return posts, comments
