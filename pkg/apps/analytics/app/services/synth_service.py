"""Seeded synthetic corpus generator with planted behaviors.

The random stream is numpy's ``Generator(PCG64(seed))``; every draw happens
in a fixed order, so the same seed and config give byte-identical files.
Labels are written to the ground truth explicitly, so a reimplementation only
has to reproduce the planted structure, not the individual draws.

Ids are zero-padded counters: lexicographic order equals generation order.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, List, Optional, Sequence

import numpy as np
from pydantic import ValidationError

from app.core.config import settings
from app.metrics.report import ReportWriter
from app.schemas.pydantic.records import CommentRecord, PostRecord
from app.schemas.pydantic.synth import (
    DAY,
    AuthorTruth,
    BurstyAuthorSpec,
    GroundTruth,
    IntervalLaw,
    PostKind,
    PostTruth,
    SynthConfig,
)
from .exceptions import InvalidConfig
from .lifecycle_service import EvolutionClass

logger = logging.getLogger(__name__)

POSTS_FILE = "posts.jsonl"
COMMENTS_FILE = "comments.jsonl"
GROUND_TRUTH_FILE = "ground_truth.json"

_WORDS = (
    "thread", "reply", "karma", "upvote", "lorem", "ipsum", "dolor", "sit", "amet",
    "people", "think", "really", "source", "agree", "actually", "question", "answer",
)
_LINK = " https://example.com/page"
# first comments of non-fast posts never arrive sooner than this
_SLOW_FIRST_COMMENT = 30
_FOREIGN_DELAY = 60
_MIN_LIFECYCLE_COMMENTS = 20
_LIFECYCLE_SPAN_DAYS = 47
# limelight top-level comments and replies are spaced this many seconds apart
_LIMELIGHT_TOP_GAP = 10
_LIMELIGHT_REPLY_GAP = 7


@dataclass
class SynthCorpus:
    posts: List[PostRecord]
    comments: List[CommentRecord]
    truth: GroundTruth


def load_config(path: Path) -> SynthConfig:
    try:
        return SynthConfig.model_validate_json(Path(path).read_text(encoding="utf-8"))
    except ValidationError as exc:
        first = exc.errors(include_url=False)[0]
        raise InvalidConfig(f"{path}: {first['loc']}: {first['msg']}") from exc


def validate_config(config: SynthConfig) -> None:
    """Cross-field checks the generator relies on to keep planted labels exact."""
    if config.n_planted > config.n_posts:
        raise InvalidConfig(f"{config.n_planted} planted posts exceed n_posts={config.n_posts}")
    if config.window_days < 3:
        raise InvalidConfig("window_days must be at least 3")
    cyborg = config.cyborg
    if cyborg.max_latency_seconds > settings.CYBORG_LATENCY_MAX_SECONDS:
        raise InvalidConfig("planted cyborg latency exceeds the detection latency")
    if cyborg.comment_chars <= settings.CYBORG_MIN_CHARS:
        raise InvalidConfig(f"planted cyborg comments need more than {settings.CYBORG_MIN_CHARS} chars")
    if config.lifecycle.total:
        if config.lifecycle.n_comments < _MIN_LIFECYCLE_COMMENTS:
            raise InvalidConfig(f"lifecycle posts need at least {_MIN_LIFECYCLE_COMMENTS} comments")
        if config.window_days < _LIFECYCLE_SPAN_DAYS:
            raise InvalidConfig(f"lifecycle posts need a window of {_LIFECYCLE_SPAN_DAYS} days")
    limelight = config.limelight
    if any(not 0 < t <= 1 for t in limelight.targets):
        raise InvalidConfig("limelight targets must lie in (0, 1]")
    if limelight.n_hog_same_author > len(limelight.targets):
        raise InvalidConfig("n_hog_same_author exceeds the number of limelight targets")
    # limelight posts start at least a day before the window end
    if limelight.targets and _SLOW_FIRST_COMMENT + _LIMELIGHT_TOP_GAP * limelight.n_comments >= DAY:
        raise InvalidConfig(
            f"limelight n_comments={limelight.n_comments} does not fit into one day of replies"
        )
    controversial = config.controversial
    if controversial.n_posts:
        k = math.ceil(round(controversial.deleted_fraction * controversial.n_comments, 9))
        if k / controversial.n_comments <= settings.CONTROVERSY_THETA:
            raise InvalidConfig(
                f"deleted_fraction {controversial.deleted_fraction} does not exceed "
                f"{settings.CONTROVERSY_THETA} on {controversial.n_comments} comments"
            )


class CorpusGenerator:
    def __init__(self, config: SynthConfig) -> None:
        validate_config(config)
        self.config = config
        self.rng = np.random.Generator(np.random.PCG64(config.seed))
        self.start = config.window_start_utc
        self.end = config.window_end_utc
        self.authors = [f"user_{i:05d}" for i in range(config.n_authors)]
        weights = np.asarray([s.weight for s in config.subreddits], dtype=np.float64)
        self.subreddit_names = [s.name for s in config.subreddits]
        self.subreddit_p = weights / weights.sum()
        self.posts: List[PostRecord] = []
        self.comments: List[CommentRecord] = []
        self.truth: List[PostTruth] = []
        self._n_comments = 0

    # -- primitives ---------------------------------------------------------
    def _author(self, exclude: Optional[str] = None) -> str:
        idx = int(self.rng.integers(len(self.authors)))
        if self.authors[idx] == exclude:
            idx = (idx + 1) % len(self.authors)
        return self.authors[idx]

    def _subreddit(self) -> str:
        if not self.subreddit_names:
            return ""
        idx = self.rng.choice(len(self.subreddit_names), p=self.subreddit_p)
        return self.subreddit_names[int(idx)]

    def _text(self, n_chars: int) -> str:
        """Exactly `n_chars` characters of filler words."""
        words: List[str] = []
        length = 0  # len(" ".join(words))
        while length < n_chars:
            word = _WORDS[int(self.rng.integers(len(_WORDS)))]
            length += len(word) + (1 if words else 0)
            words.append(word)
        return " ".join(words)[:n_chars]

    def _post_time(self, margin: int) -> int:
        return int(self.rng.integers(self.start, self.end - margin))

    def _comment(
        self,
        post: str,
        parent: str,
        author: str,
        created: int,
        body: str,
        subreddit: str,
    ) -> str:
        self._n_comments += 1
        name = f"t1_{self._n_comments:09d}"
        self.comments.append(
            CommentRecord(
                name=name,
                author=author,
                created_utc=int(created),
                link_id=post,
                parent_id=parent,
                body=body,
                subreddit=subreddit,
                score=int(self.rng.integers(-2, 20)),
            )
        )
        return name

    def _thread(
        self,
        post_id: str,
        subreddit: str,
        times: Sequence[int],
        deleted: Sequence[bool] = (),
        reply_p: float = 0.5,
    ) -> None:
        """Comments at `times` (sorted), each replying to the post or an earlier comment."""
        names: List[str] = []
        for j, t in enumerate(times):
            parent = post_id
            if names and self.rng.random() < reply_p:
                parent = names[int(self.rng.integers(len(names)))]
            if deleted and deleted[j]:
                markers = settings.DELETED_BODY_MARKERS
                marker = markers[int(self.rng.integers(len(markers)))]
                author, body = settings.DELETED_AUTHOR_MARKER, marker
            else:
                author, body = self._author(), self._text(int(self.rng.integers(5, 200)))
            names.append(self._comment(post_id, parent, author, t, body, subreddit))

    def _add_post(
        self,
        post_id: str,
        author: str,
        created: int,
        subreddit: str,
        n_comments: int,
        score: int,
        truth: dict,
    ) -> None:
        self.posts.append(
            PostRecord(
                name=post_id,
                author=author,
                created_utc=int(created),
                num_comments=n_comments,
                subreddit=subreddit,
                score=score,
                title=self._text(int(self.rng.integers(10, 60))),
            )
        )
        self.truth.append(
            PostTruth(post_id=post_id, author=author, subreddit=subreddit, n_comments=n_comments, **truth)
        )

    # -- planted behaviors --------------------------------------------------
    def _background(self, post_id: str) -> None:
        cfg = self.config
        t0 = self._post_time(2 * DAY)
        sub = self._subreddit()
        deleted_author = self.rng.random() < cfg.background_deleted_fraction
        author = settings.DELETED_AUTHOR_MARKER if deleted_author else self._author()
        n = int(self.rng.poisson(cfg.background_comments_mean))
        gaps = self.rng.exponential(3600.0, n)
        times = np.minimum(t0 + _SLOW_FIRST_COMMENT + np.floor(np.cumsum(gaps)), self.end - 1)
        # never above the controversial threshold
        n_del = min(int(self.rng.binomial(n, cfg.background_deleted_fraction)), math.floor(0.2 * n))
        flags = np.zeros(n, dtype=bool)
        if n_del:
            flags[self.rng.choice(n, n_del, replace=False)] = True
        self._add_post(
            post_id, author, t0, sub, n, int(self.rng.integers(0, 50)),
            {"kind": PostKind.BACKGROUND, "deleted_fraction": n_del / n if n else None},
        )
        self._thread(post_id, sub, [int(t) for t in times], flags.tolist())

    def _fast(self, post_id: str, kind: PostKind, successful: bool) -> None:
        cyborg = self.config.cyborg
        t0 = self._post_time(DAY)
        sub = self._subreddit()
        author = self._author()
        latency = int(self.rng.integers(0, cyborg.max_latency_seconds + 1))
        if kind is PostKind.CYBORG:
            first_author, body = author, self._text(cyborg.comment_chars)
        elif kind is PostKind.FAST_SHORT:
            first_author = author
            body = self._text(int(self.rng.integers(1, settings.CYBORG_MIN_CHARS + 1)))
        elif kind is PostKind.FAST_LINK:
            first_author, body = author, self._text(cyborg.comment_chars) + _LINK
        else:
            first_author = self._author(exclude=author)
            body = self._text(int(self.rng.integers(1, 300)))
            successful = True
        n_foreign = int(self.rng.integers(1, 4)) if successful and first_author == author else 0
        self._add_post(
            post_id, author, t0, sub, 1 + n_foreign, settings.DEFAULT_SCORE,
            {"kind": kind, "cyborg_like": kind is PostKind.CYBORG, "successful": successful},
        )
        self._comment(post_id, post_id, first_author, t0 + latency, body, sub)
        for i in range(n_foreign):
            t = t0 + _FOREIGN_DELAY + i * int(self.rng.integers(1, 600))
            self._comment(post_id, post_id, self._author(exclude=author), t, self._text(40), sub)

    def _lifecycle(self, post_id: str, cls: EvolutionClass) -> None:
        n = self.config.lifecycle.n_comments
        t0 = self.start + int(self.rng.integers(0, DAY))
        sub = self._subreddit()
        lo = _SLOW_FIRST_COMMENT
        if cls is EvolutionClass.EARLY_BLOOMER:
            head = n - n // 5
            elapsed = np.concatenate(
                [
                    self.rng.integers(lo, 20 * 3600, head),
                    self.rng.integers(DAY + 1, 10 * DAY, n - head),
                ]
            )
        elif cls is EvolutionClass.STEADY:
            elapsed = lo + (np.arange(n) * (20 * DAY)) // n
        else:
            head = n // 5
            elapsed = np.concatenate(
                [
                    self.rng.integers(lo, 30 * DAY, head),
                    self.rng.integers(40 * DAY, 45 * DAY, n - head),
                ]
            )
        self._add_post(
            post_id, self._author(), t0, sub, n, int(self.rng.integers(1, 5000)),
            {"kind": PostKind.LIFECYCLE, "lifecycle_class": cls.value, "deleted_fraction": 0.0},
        )
        self._thread(post_id, sub, [t0 + int(e) for e in np.sort(elapsed)])

    def _limelight(self, post_id: str, target: float, hog_same: bool) -> None:
        n = self.config.limelight.n_comments
        dominant = min(n, max(1, round(target * n)))
        sizes = [dominant]
        rest = n - dominant
        while rest > 0:
            size = int(self.rng.integers(1, min(dominant, rest) + 1))
            sizes.append(size)
            rest -= size
        t0 = self._post_time(DAY)
        sub = self._subreddit()
        author = self._author()
        hog = author if hog_same else self._author(exclude=author)
        self._add_post(
            post_id, author, t0, sub, n, int(self.rng.integers(1, 500)),
            {
                "kind": PostKind.LIMELIGHT,
                "limelight_target": target,
                "limelight_score": dominant / n,
                "hog_is_post_author": hog_same,
                "deleted_fraction": 0.0,
            },
        )
        tops = []
        for j in range(len(sizes)):
            first_author = hog if j == 0 else self._author()
            t = t0 + _SLOW_FIRST_COMMENT + _LIMELIGHT_TOP_GAP * j
            tops.append(self._comment(post_id, post_id, first_author, t, self._text(60), sub))
        t = t0 + _SLOW_FIRST_COMMENT + _LIMELIGHT_TOP_GAP * len(sizes)
        for top, size in zip(tops, sizes):
            members = [top]
            for _ in range(size - 1):
                parent = members[int(self.rng.integers(len(members)))]
                t += _LIMELIGHT_REPLY_GAP
                members.append(self._comment(post_id, parent, self._author(), t, self._text(40), sub))

    def _controversial(self, post_id: str) -> None:
        plant = self.config.controversial
        n = plant.n_comments
        k = math.ceil(round(plant.deleted_fraction * n, 9))
        t0 = self._post_time(DAY)
        sub = self._subreddit()
        flags = np.zeros(n, dtype=bool)
        flags[self.rng.choice(n, k, replace=False)] = True
        times = np.minimum(
            t0 + _SLOW_FIRST_COMMENT + np.floor(np.cumsum(self.rng.exponential(600.0, n))), self.end - 1
        )
        self._add_post(
            post_id, self._author(), t0, sub, n, int(self.rng.integers(1, 100)),
            {"kind": PostKind.CONTROVERSIAL, "controversial": True, "deleted_fraction": k / n},
        )
        self._thread(post_id, sub, [int(t) for t in times], flags.tolist())

    def _bursty(self, post_id: str, author: str, created: int) -> None:
        self._add_post(
            post_id, author, created, self._subreddit(), 0, settings.DEFAULT_SCORE,
            {"kind": PostKind.BURSTY},
        )

    def _bursty_times(self, spec: BurstyAuthorSpec) -> List[int]:
        m = spec.n_posts - 1
        if spec.law is IntervalLaw.REGULAR:
            intervals = np.full(m, spec.mean_interval_seconds)
        elif spec.law is IntervalLaw.EXPONENTIAL:
            intervals = self.rng.exponential(spec.mean_interval_seconds, m)
        else:
            scale = spec.mean_interval_seconds * (spec.alpha - 1) / spec.alpha
            intervals = (self.rng.pareto(spec.alpha, m) + 1.0) * scale
        budget = (self.config.window_days - 2) * DAY
        total = float(intervals.sum())
        if total > budget:
            intervals = intervals * (budget / total)
        steps = np.floor(intervals).astype(np.int64)
        if spec.law is IntervalLaw.REGULAR and steps[0] == 0:
            raise InvalidConfig("regular bursty author does not fit into the window")
        first = self.start + int(self.rng.integers(0, DAY))
        return [first + int(x) for x in np.concatenate([[0], np.cumsum(steps)])]

    # -- driver -------------------------------------------------------------
    def run(self) -> SynthCorpus:
        cfg = self.config
        slots: List[Callable[[str], None]] = []
        cyborg = cfg.cyborg
        slots += [lambda pid: self._fast(pid, PostKind.CYBORG, True)] * cyborg.n_successful
        slots += [lambda pid: self._fast(pid, PostKind.CYBORG, False)] * cyborg.n_unsuccessful
        slots += [lambda pid: self._fast(pid, PostKind.FAST_OTHER_AUTHOR, True)] * cyborg.n_other_author
        for i in range(cyborg.n_short):
            slots.append(lambda pid, ok=i % 2 == 0: self._fast(pid, PostKind.FAST_SHORT, ok))
        for i in range(cyborg.n_link):
            slots.append(lambda pid, ok=i % 2 == 0: self._fast(pid, PostKind.FAST_LINK, ok))
        for cls, count in (
            (EvolutionClass.EARLY_BLOOMER, cfg.lifecycle.n_early),
            (EvolutionClass.STEADY, cfg.lifecycle.n_steady),
            (EvolutionClass.LATE_BLOOMER, cfg.lifecycle.n_late),
        ):
            slots += [lambda pid, c=cls: self._lifecycle(pid, c)] * count
        for i, target in enumerate(cfg.limelight.targets):
            same = i < cfg.limelight.n_hog_same_author
            slots.append(lambda pid, t=target, s=same: self._limelight(pid, t, s))
        slots += [self._controversial] * cfg.controversial.n_posts

        authors: List[AuthorTruth] = []
        for idx, spec in enumerate(cfg.bursty_authors):
            name = f"bursty_{idx:04d}"
            authors.append(AuthorTruth(author=name, law=spec.law, n_posts=spec.n_posts))
            for created in self._bursty_times(spec):
                slots.append(lambda pid, a=name, t=created: self._bursty(pid, a, t))
        slots += [self._background] * (cfg.n_posts - len(slots))

        order = self.rng.permutation(len(slots))
        for i, slot_idx in enumerate(order):
            slots[int(slot_idx)](f"t3_{i:08d}")

        truth = GroundTruth(
            seed=cfg.seed,
            window_start_utc=self.start,
            window_end_utc=self.end,
            posts=self.truth,
            authors=authors,
        )
        logger.info(
            "generated %d posts and %d comments (seed %d)", len(self.posts), len(self.comments), cfg.seed
        )
        return SynthCorpus(self.posts, self.comments, truth)


def generate(config: SynthConfig) -> SynthCorpus:
    return CorpusGenerator(config).run()


def write_corpus(corpus: SynthCorpus, writer: ReportWriter) -> List[Path]:
    return [
        writer.write_lines(POSTS_FILE, (p.to_json_line() for p in corpus.posts)),
        writer.write_lines(COMMENTS_FILE, (c.to_json_line() for c in corpus.comments)),
        writer.write_json(GROUND_TRUTH_FILE, corpus.truth),
    ]
