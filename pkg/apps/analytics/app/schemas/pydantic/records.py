from __future__ import annotations

from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from pydantic_core import PydanticCustomError

from app.core.config import settings

POST_PREFIX = "t3_"
COMMENT_PREFIX = "t1_"


def _deleted_marker() -> str:
    return settings.DELETED_AUTHOR_MARKER


def _coerce_timestamp(value: Any) -> Any:
    # Older dumps store created_utc as a string, some as a float with a zero fraction
    if isinstance(value, str):
        value = float(value) if "." in value or "e" in value.lower() else int(value)
    if isinstance(value, float) and value.is_integer():
        return int(value)
    return value


def _require_prefix(value: str, prefixes: tuple[str, ...], field: str) -> str:
    if not value.startswith(prefixes):
        raise PydanticCustomError(
            "bad_prefix",
            "{field} must start with one of {prefixes}",
            {"field": field, "prefixes": ", ".join(prefixes)},
        )
    return value


class _DumpRecord(BaseModel):
    model_config = ConfigDict(frozen=True, extra="ignore")

    author: str = Field(default_factory=_deleted_marker)
    created_utc: int = Field(..., gt=0)
    subreddit: str = ""
    score: int = Field(default_factory=lambda: settings.DEFAULT_SCORE)

    @field_validator("author", mode="before")
    @classmethod
    def _normalize_author(cls, value: Any) -> Any:
        if value is None or value == "":
            return settings.DELETED_AUTHOR_MARKER
        return value

    @field_validator("created_utc", mode="before")
    @classmethod
    def _normalize_created(cls, value: Any) -> Any:
        return _coerce_timestamp(value)

    @field_validator("subreddit", mode="before")
    @classmethod
    def _none_as_empty(cls, value: Any) -> Any:
        return "" if value is None else value

    @property
    def is_deleted_author(self) -> bool:
        return self.author == settings.DELETED_AUTHOR_MARKER

    def to_json_line(self) -> str:
        return self.model_dump_json()


class PostRecord(_DumpRecord):
    name: str
    num_comments: int = Field(0, ge=0)
    title: str = ""
    selftext: str = ""

    @field_validator("name")
    @classmethod
    def _post_prefix(cls, value: str) -> str:
        return _require_prefix(value, (POST_PREFIX,), "name")

    @field_validator("title", "selftext", mode="before")
    @classmethod
    def _text_none_as_empty(cls, value: Any) -> Any:
        return "" if value is None else value

    @field_validator("num_comments", mode="before")
    @classmethod
    def _num_comments_none(cls, value: Any) -> Any:
        return 0 if value is None else value


class CommentRecord(_DumpRecord):
    name: str
    link_id: str
    parent_id: str
    body: str = ""

    @field_validator("name")
    @classmethod
    def _comment_prefix(cls, value: str) -> str:
        return _require_prefix(value, (COMMENT_PREFIX,), "name")

    @field_validator("link_id")
    @classmethod
    def _link_prefix(cls, value: str) -> str:
        return _require_prefix(value, (POST_PREFIX,), "link_id")

    @field_validator("parent_id")
    @classmethod
    def _parent_prefix(cls, value: str) -> str:
        return _require_prefix(value, (COMMENT_PREFIX, POST_PREFIX), "parent_id")

    @field_validator("body", mode="before")
    @classmethod
    def _body_none_as_empty(cls, value: Any) -> Any:
        return "" if value is None else value

    @property
    def is_top_level(self) -> bool:
        return self.parent_id.startswith(POST_PREFIX)


class AnalysisWindow(BaseModel):
    """Half-open period [start_utc, end_utc) in UNIX seconds."""

    model_config = ConfigDict(frozen=True)

    start_utc: int
    end_utc: int

    @model_validator(mode="after")
    def _ordered(self) -> "AnalysisWindow":
        if self.start_utc >= self.end_utc:
            raise ValueError("window start must precede window end")
        return self

    def contains(self, timestamp: int) -> bool:
        return self.start_utc <= timestamp < self.end_utc

    @property
    def span_seconds(self) -> int:
        return self.end_utc - self.start_utc
