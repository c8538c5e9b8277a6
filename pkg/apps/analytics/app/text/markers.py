"""Dump body/author marker helpers.

Public dumps keep deleted and moderator-removed content as placeholder
strings instead of dropping the record. Everything that needs to tell a
placeholder from real text goes through this module so the marker sets
stay configurable in one place.
"""
from __future__ import annotations

from typing import Iterable, Optional

from app.core.config import settings


def is_deleted_author(author: Optional[str]) -> bool:
    return not author or author == settings.DELETED_AUTHOR_MARKER


def is_deleted_body(
    body: Optional[str],
    author: Optional[str] = None,
    markers: Optional[Iterable[str]] = None,
) -> bool:
    """A comment counts as deleted when its body is exactly a marker, or its
    author is the deleted marker and the body is empty."""
    marker_set = settings.DELETED_BODY_MARKERS if markers is None else markers
    if body in marker_set:
        return True
    return not body and author is not None and is_deleted_author(author)


def is_removed_body(body: Optional[str]) -> bool:
    return body == settings.REMOVED_BODY_MARKER


def contains_link(body: Optional[str], markers: Optional[Iterable[str]] = None) -> bool:
    if not body:
        return False
    lowered = body.lower()
    return any(m in lowered for m in (settings.URL_MARKERS if markers is None else markers))


def char_count(body: Optional[str]) -> int:
    # str length counts Unicode scalar values, independent of the wire encoding
    return len(body) if body else 0
