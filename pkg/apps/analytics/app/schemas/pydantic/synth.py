from __future__ import annotations

from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field

# 2015-01-01T00:00:00Z
DEFAULT_WINDOW_START = 1_420_070_400
DAY = 86_400


class IntervalLaw(str, Enum):
    REGULAR = "regular"
    EXPONENTIAL = "exponential"
    PARETO = "pareto"


class PostKind(str, Enum):
    BACKGROUND = "background"
    CYBORG = "cyborg"
    FAST_OTHER_AUTHOR = "fast_other_author"
    FAST_SHORT = "fast_same_author_short"
    FAST_LINK = "fast_same_author_link"
    LIFECYCLE = "lifecycle"
    LIMELIGHT = "limelight"
    BURSTY = "bursty"
    CONTROVERSIAL = "controversial"


class SubredditSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str = Field(..., min_length=1)
    weight: float = Field(1.0, gt=0)


class CyborgPlant(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n_successful: int = Field(0, ge=0)
    n_unsuccessful: int = Field(0, ge=0)
    max_latency_seconds: int = Field(6, ge=0)
    comment_chars: int = Field(150, ge=1)
    # fast same-author posts that fail the length or link test
    n_short: int = Field(0, ge=0)
    n_link: int = Field(0, ge=0)
    # fast posts whose first comment comes from someone else
    n_other_author: int = Field(0, ge=0)

    @property
    def total(self) -> int:
        return self.n_successful + self.n_unsuccessful + self.n_short + self.n_link + self.n_other_author


class LifecyclePlant(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n_early: int = Field(0, ge=0)
    n_steady: int = Field(0, ge=0)
    n_late: int = Field(0, ge=0)
    n_comments: int = Field(600, ge=1)

    @property
    def total(self) -> int:
        return self.n_early + self.n_steady + self.n_late


class LimelightPlant(BaseModel):
    model_config = ConfigDict(extra="forbid")

    targets: List[float] = Field(default_factory=list)
    n_comments: int = Field(100, ge=1)
    # the first n_hog_same_author planted trees get a hog written by the post author
    n_hog_same_author: int = Field(0, ge=0)


class BurstyAuthorSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    law: IntervalLaw
    n_posts: int = Field(100, ge=2)
    mean_interval_seconds: float = Field(3600.0, gt=0)
    alpha: float = Field(1.5, gt=1.0)


class ControversialPlant(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n_posts: int = Field(0, ge=0)
    n_comments: int = Field(20, ge=1)
    deleted_fraction: float = Field(0.3, ge=0, le=1)


class SynthConfig(BaseModel):
    """Seeded description of a synthetic corpus and the behaviors planted in it."""

    model_config = ConfigDict(extra="forbid")

    seed: int = 0
    n_posts: int = Field(1000, ge=0)
    n_authors: int = Field(200, ge=2)
    window_start_utc: int = Field(DEFAULT_WINDOW_START, gt=0)
    window_days: int = Field(120, ge=1)
    subreddits: List[SubredditSpec] = Field(
        default_factory=lambda: [
            SubredditSpec(name="AskReddit", weight=5.0),
            SubredditSpec(name="news", weight=2.0),
            SubredditSpec(name="programming", weight=1.0),
        ]
    )
    background_comments_mean: float = Field(8.0, ge=0)
    background_deleted_fraction: float = Field(0.05, ge=0, le=1)
    cyborg: CyborgPlant = Field(default_factory=CyborgPlant)
    lifecycle: LifecyclePlant = Field(default_factory=LifecyclePlant)
    limelight: LimelightPlant = Field(default_factory=LimelightPlant)
    bursty_authors: List[BurstyAuthorSpec] = Field(default_factory=list)
    controversial: ControversialPlant = Field(default_factory=ControversialPlant)

    @property
    def window_end_utc(self) -> int:
        return self.window_start_utc + self.window_days * DAY

    @property
    def n_planted(self) -> int:
        return (
            self.cyborg.total
            + self.lifecycle.total
            + len(self.limelight.targets)
            + sum(a.n_posts for a in self.bursty_authors)
            + self.controversial.n_posts
        )


class PostTruth(BaseModel):
    post_id: str
    kind: PostKind
    author: str
    subreddit: str
    n_comments: int
    cyborg_like: bool = False
    successful: Optional[bool] = None
    lifecycle_class: Optional[str] = None
    limelight_target: Optional[float] = None
    limelight_score: Optional[float] = None
    hog_is_post_author: Optional[bool] = None
    controversial: bool = False
    deleted_fraction: Optional[float] = None


class AuthorTruth(BaseModel):
    author: str
    law: IntervalLaw
    n_posts: int


class GroundTruth(BaseModel):
    seed: int
    window_start_utc: int
    window_end_utc: int
    posts: List[PostTruth] = Field(default_factory=list)
    authors: List[AuthorTruth] = Field(default_factory=list)

    def post_ids(self, **labels: object) -> List[str]:
        """Ids of posts whose truth matches every given label, in id order."""
        return sorted(
            p.post_id for p in self.posts if all(getattr(p, k) == v for k, v in labels.items())
        )
