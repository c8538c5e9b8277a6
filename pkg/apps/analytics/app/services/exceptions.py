from typing import Optional


class AnalyticsError(Exception):
    """Base exception for corpus analytics operations."""
    pass


# Dump parsing -----------------------------------------------------------------


class RecordParseError(AnalyticsError):
    """
    Base for errors raised while turning one dump line into a record.
    """

    code = "PARSE_ERROR"

    def __init__(self, field: Optional[str] = None, message: Optional[str] = None):
        if field and not message:
            message = f"Dump line rejected at field '{field}'."
        elif not message:
            message = "Dump line rejected."
        super().__init__(message)
        self.field = field


class MalformedJson(RecordParseError):
    """Raised when a dump line is not a JSON object."""

    code = "MALFORMED_JSON"

    def __init__(self, message: Optional[str] = None):
        super().__init__(message=message or "Dump line is not valid JSON.")


class MissingField(RecordParseError):
    """Raised when a required field (id, timestamp, links) is absent."""

    code = "MISSING_FIELD"

    def __init__(self, field: Optional[str] = None, message: Optional[str] = None):
        if field and not message:
            message = f"Required field '{field}' is missing."
        super().__init__(field, message)


class BadPrefix(RecordParseError):
    """Raised when an id does not carry the expected kind prefix."""

    code = "BAD_PREFIX"

    def __init__(self, field: Optional[str] = None, message: Optional[str] = None):
        if field and not message:
            message = f"Field '{field}' carries an unexpected id prefix."
        super().__init__(field, message)


class InvalidField(RecordParseError):
    code = "INVALID_FIELD"

    def __init__(self, field: Optional[str] = None, message: Optional[str] = None):
        if field and not message:
            message = f"Field '{field}' has an invalid value."
        super().__init__(field, message)


# Tree -------------------------------------------------------------------------


class CycleDetected(AnalyticsError):
    """
    Raised (strict mode) or reported when parent links of comments form a cycle.
    """

    def __init__(self, post_id: Optional[str] = None, comment_ids: Optional[list[str]] = None):
        members = ", ".join(comment_ids or [])
        if post_id:
            message = f"Parent links on post {post_id} form a cycle: {members}."
        else:
            message = f"Parent links form a cycle: {members}."
        super().__init__(message)
        self.post_id = post_id
        self.comment_ids = list(comment_ids or [])


class NoFirstLevelComments(AnalyticsError):
    def __init__(self, post_id: Optional[str] = None, message: Optional[str] = None):
        if post_id and not message:
            message = f"Post {post_id} has no first-level comments; limelight is undefined."
        elif not message:
            message = "No first-level comments; limelight is undefined."
        super().__init__(message)
        self.post_id = post_id


# Thresholds and degenerate inputs ---------------------------------------------


class BelowThreshold(AnalyticsError):
    """
    Raised when an entity has fewer qualifying items than the analysis requires.
    """

    def __init__(
        self,
        entity_id: Optional[str] = None,
        observed: Optional[int] = None,
        required: Optional[str] = None,
        message: Optional[str] = None,
    ):
        if not message:
            subject = entity_id or "entity"
            message = f"{subject} has {observed} qualifying items; requires {required}."
        super().__init__(message)
        self.entity_id = entity_id
        self.observed = observed
        self.required = required


class BadBinSpec(AnalyticsError):
    def __init__(self, message: Optional[str] = None):
        super().__init__(message or "Histogram bin specification is invalid.")


class TooFewEvents(AnalyticsError):
    def __init__(self, n_events: int = 0, message: Optional[str] = None):
        super().__init__(message or f"At least 2 events are required; got {n_events}.")
        self.n_events = n_events


class DegenerateSeries(AnalyticsError):
    """Raised when every inter-event time is zero (sigma + mu == 0)."""

    def __init__(self, owner: Optional[str] = None, message: Optional[str] = None):
        if owner and not message:
            message = f"All events of {owner} are simultaneous; burstiness is undefined."
        elif not message:
            message = "All events are simultaneous; burstiness is undefined."
        super().__init__(message)
        self.owner = owner


class UndefinedInteractionScore(AnalyticsError):
    def __init__(self, author: Optional[str] = None):
        super().__init__(
            f"Author {author} neither received nor made effective comments."
            if author
            else "Interaction score is undefined when A + B = 0."
        )
        self.author = author


class NoPosts(AnalyticsError):
    def __init__(self, author: Optional[str] = None):
        super().__init__(f"Author {author} has no posts." if author else "Author has no posts.")
        self.author = author


class NoComments(AnalyticsError):
    def __init__(self, post_id: Optional[str] = None):
        super().__init__(
            f"Post {post_id} has no comments; controversiality is undefined."
            if post_id
            else "Post has no comments; controversiality is undefined."
        )
        self.post_id = post_id


class ZeroPosts(AnalyticsError):
    def __init__(self, message: Optional[str] = None):
        super().__init__(message or "A subreddit popularity category needs at least one post.")


class InvalidConfig(AnalyticsError):
    """Raised when a synthetic-corpus or run configuration is inconsistent."""

    def __init__(self, message: Optional[str] = None):
        super().__init__(message or "Configuration is invalid.")
