from __future__ import annotations
from dataclasses import dataclass
from typing import Type, Dict, Any

from pydantic import ValidationError

from app.services.exceptions import (
    AnalyticsError,
    RecordParseError,
    CycleDetected,
    NoFirstLevelComments,
    BelowThreshold,
    BadBinSpec,
    TooFewEvents,
    DegenerateSeries,
    UndefinedInteractionScore,
    NoPosts,
    NoComments,
    ZeroPosts,
    InvalidConfig,
)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


@dataclass(frozen=True)
class ErrorMeta:
    code: str
    exit_status: int


ERROR_MAP: Dict[Type[BaseException], ErrorMeta] = {
    InvalidConfig: ErrorMeta("INVALID_CONFIG", EXIT_USAGE),
    ValidationError: ErrorMeta("INVALID_CONFIG", EXIT_USAGE),
    BadBinSpec: ErrorMeta("BAD_BIN_SPEC", EXIT_USAGE),
    RecordParseError: ErrorMeta("PARSE_ERROR", EXIT_FAILURE),
    CycleDetected: ErrorMeta("CYCLE_DETECTED", EXIT_FAILURE),
    NoFirstLevelComments: ErrorMeta("NO_FIRST_LEVEL_COMMENTS", EXIT_FAILURE),
    BelowThreshold: ErrorMeta("BELOW_THRESHOLD", EXIT_FAILURE),
    TooFewEvents: ErrorMeta("TOO_FEW_EVENTS", EXIT_FAILURE),
    DegenerateSeries: ErrorMeta("DEGENERATE_SERIES", EXIT_FAILURE),
    UndefinedInteractionScore: ErrorMeta("UNDEFINED_INTERACTION_SCORE", EXIT_FAILURE),
    NoPosts: ErrorMeta("NO_POSTS", EXIT_FAILURE),
    NoComments: ErrorMeta("NO_COMMENTS", EXIT_FAILURE),
    ZeroPosts: ErrorMeta("ZERO_POSTS", EXIT_FAILURE),
    OSError: ErrorMeta("IO_ERROR", EXIT_FAILURE),
}


def _lookup(exc: BaseException) -> ErrorMeta | None:
    # Walk the MRO so subclasses (MalformedJson, FileNotFoundError, ...) inherit their parent's code
    for klass in type(exc).__mro__:
        meta = ERROR_MAP.get(klass)
        if meta:
            return meta
    return None


def to_error_payload(exc: BaseException) -> tuple[int, dict[str, Any]]:
    meta = _lookup(exc)
    if meta:
        code = getattr(exc, "code", None) if isinstance(exc, RecordParseError) else None
        return meta.exit_status, {
            "error": {"code": code or meta.code, "message": str(exc)},
        }
    if isinstance(exc, AnalyticsError):
        return EXIT_FAILURE, {"error": {"code": "ANALYTICS_ERROR", "message": str(exc)}}
    return EXIT_FAILURE, {
        "error": {"code": "INTERNAL_ERROR", "message": "Internal error"},
    }
