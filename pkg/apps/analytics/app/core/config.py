import os
import sys
import logging
from typing import List, Optional, Literal, cast

import coloredlogs
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # Project Configuration
    PROJECT_NAME: str = "Reddit Behavior Analytics"

    # Environment Configuration
    ENVIRONMENT: str = "production"
    LOG_LEVEL: Optional[str] = None  # overrides the environment-derived level when set
    SHOW_PROGRESS: bool = True
    DEFAULT_SHARDS: int = 1

    # Dump conventions
    DELETED_AUTHOR_MARKER: str = "[deleted]"
    DELETED_BODY_MARKERS: List[str] = ["[deleted]", "[removed]"]
    REMOVED_BODY_MARKER: str = "[removed]"
    URL_MARKERS: List[str] = ["http://", "https://", "www."]
    AUTOMODERATOR_AUTHOR: str = "AutoModerator"
    DEFAULT_SCORE: int = 1  # the author's own auto-upvote

    # Age / Mayfly
    MAYFLY_THRESHOLD_SECONDS: int = 86_400
    ONE_COMMENT_QUICK_AGE_SECONDS: int = 600
    AGE_BINS_PER_DECADE: int = 20
    GROWTH_CURVE_POINTS_PER_DECADE: int = 5

    # Cyborg-like posts
    CYBORG_LATENCY_MAX_SECONDS: int = 6
    CYBORG_MIN_CHARS: int = 100

    # Popular post lifecycle
    LIFECYCLE_FRACTION: float = 0.75
    LIFECYCLE_EARLY_SECONDS: int = 86_400
    LIFECYCLE_LATE_SECONDS: int = 2_592_000  # 30 days
    POPULAR_MIN_COMMENTS: int = 500

    # Limelight
    LIMELIGHT_HOG_THRESHOLD: float = 0.25

    # Burstiness
    BURST_MIN_AUTHOR_POSTS: int = 100
    BURST_MIN_AUTHOR_COMMENTS: int = 500
    BURST_MIN_POST_COMMENTS: int = 500
    SCORE_HISTOGRAM_BINS: int = 20

    # Controversiality
    CONTROVERSY_THETA: float = 0.2
    CONTROVERSY_MIN_COMMENTS: int = 500
    CONTROVERSY_MIN_SUBREDDIT_POSTS: int = 100
    CONTROVERSY_MIN_AUTHOR_POSTS: int = 50

    model_config = SettingsConfigDict(
        env_file=os.path.join(os.path.dirname(__file__), os.pardir, os.pardir, ".env"),
        env_file_encoding="utf-8",
        extra="ignore",
    )


settings = Settings()


_LEVEL_BY_ENV: dict[Literal["production", "staging", "local"], int] = {
    "production": logging.INFO,
    "staging": logging.DEBUG,
    "local": logging.DEBUG,
}

_LOG_FORMAT = "[%(asctime)s - %(name)s - %(levelname)s] %(message)s"
_DATE_FORMAT = "%Y-%m-%dT%H:%M:%S%z"


def setup_logging() -> None:
    """
    Configure the root logger exactly once,

    * Console only (stderr), coloured by coloredlogs when attached to a terminal
    * ISO - 8601 timestamps
    * Env - based log level: production -> INFO, else DEBUG; LOG_LEVEL wins when set
    * Prevents duplicate handler creation if called twice
    """
    root = logging.getLogger()
    if root.handlers:
        return

    env_norm = str(settings.ENVIRONMENT).lower()
    if env_norm not in _LEVEL_BY_ENV:
        env_norm = "production"
    level = _LEVEL_BY_ENV[cast(Literal["production", "staging", "local"], env_norm)]
    if settings.LOG_LEVEL:
        level = logging.getLevelName(settings.LOG_LEVEL.upper())
        if not isinstance(level, int):
            level = logging.INFO

    coloredlogs.install(
        level=level,
        logger=root,
        fmt=_LOG_FORMAT,
        datefmt=_DATE_FORMAT,
        stream=sys.stderr,
        isatty=None,
    )
