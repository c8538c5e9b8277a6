from .ingest_service import (
    Corpus,
    CorpusBuilder,
    build_corpus,
    corpus_stats,
    ingest_files,
    parse_comment_line,
    parse_post_line,
)
from .exceptions import (
    AnalyticsError,
    RecordParseError,
    MalformedJson,
    MissingField,
    BadPrefix,
    InvalidField,
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

__all__ = [
    "Corpus",
    "CorpusBuilder",
    "build_corpus",
    "corpus_stats",
    "ingest_files",
    "parse_comment_line",
    "parse_post_line",
    "AnalyticsError",
    "RecordParseError",
    "MalformedJson",
    "MissingField",
    "BadPrefix",
    "InvalidField",
    "CycleDetected",
    "NoFirstLevelComments",
    "BelowThreshold",
    "BadBinSpec",
    "TooFewEvents",
    "DegenerateSeries",
    "UndefinedInteractionScore",
    "NoPosts",
    "NoComments",
    "ZeroPosts",
    "InvalidConfig",
]
