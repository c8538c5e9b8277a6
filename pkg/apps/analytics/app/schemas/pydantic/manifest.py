from __future__ import annotations

from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.core.config import settings


class Thresholds(BaseModel):
    """Every tunable of a run; defaults come from Settings."""

    model_config = ConfigDict(frozen=True)

    mayfly_threshold_seconds: int = Field(default_factory=lambda: settings.MAYFLY_THRESHOLD_SECONDS, ge=0)
    bins_per_decade: int = Field(default_factory=lambda: settings.AGE_BINS_PER_DECADE, ge=1)
    one_comment_quick_age_seconds: int = Field(
        default_factory=lambda: settings.ONE_COMMENT_QUICK_AGE_SECONDS, ge=0
    )
    lifecycle_fraction: float = Field(default_factory=lambda: settings.LIFECYCLE_FRACTION, gt=0, le=1)
    early_seconds: int = Field(default_factory=lambda: settings.LIFECYCLE_EARLY_SECONDS, ge=0)
    late_seconds: int = Field(default_factory=lambda: settings.LIFECYCLE_LATE_SECONDS, ge=0)
    popular_min_comments: int = Field(default_factory=lambda: settings.POPULAR_MIN_COMMENTS, ge=1)
    latency_max_seconds: int = Field(default_factory=lambda: settings.CYBORG_LATENCY_MAX_SECONDS, ge=0)
    min_chars: int = Field(default_factory=lambda: settings.CYBORG_MIN_CHARS, ge=0)
    hog_threshold: float = Field(default_factory=lambda: settings.LIMELIGHT_HOG_THRESHOLD, ge=0, le=1)
    burst_min_author_posts: int = Field(default_factory=lambda: settings.BURST_MIN_AUTHOR_POSTS, ge=2)
    burst_min_author_comments: int = Field(
        default_factory=lambda: settings.BURST_MIN_AUTHOR_COMMENTS, ge=2
    )
    burst_min_post_comments: int = Field(default_factory=lambda: settings.BURST_MIN_POST_COMMENTS, ge=2)
    theta: float = Field(default_factory=lambda: settings.CONTROVERSY_THETA, ge=0, le=1)
    controversy_min_comments: int = Field(
        default_factory=lambda: settings.CONTROVERSY_MIN_COMMENTS, ge=1
    )
    min_subreddit_posts: int = Field(
        default_factory=lambda: settings.CONTROVERSY_MIN_SUBREDDIT_POSTS, ge=1
    )
    min_author_posts: int = Field(default_factory=lambda: settings.CONTROVERSY_MIN_AUTHOR_POSTS, ge=0)

    @model_validator(mode="after")
    def _ordered_lifecycle(self) -> "Thresholds":
        if self.early_seconds > self.late_seconds:
            raise ValueError("early_seconds must not exceed late_seconds")
        return self


class RunManifest(BaseModel):
    command: str
    posts: List[str] = Field(default_factory=list)
    comments: List[str] = Field(default_factory=list)
    window_start_utc: Optional[int] = None
    window_end_utc: Optional[int] = None
    out_dir: str
    thresholds: Optional[Thresholds] = None
    counts: Dict[str, int] = Field(default_factory=dict)
    outputs: List[str] = Field(default_factory=list)
    # only filled with --timing; they would break byte-identical reruns
    shards: Optional[int] = None
    wall_seconds: Optional[float] = None
