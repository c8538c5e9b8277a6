from .records import AnalysisWindow, CommentRecord, PostRecord
from .reports import (
    AuthorCategoryCounts,
    AuthorSummary,
    BasicStats,
    BurstinessOverview,
    CyborgReport,
    IngestDiagnostics,
    LifecycleCounts,
    LimelightSummary,
    MayflyReport,
    OneCommentAgeReport,
)
from .synth import GroundTruth, SynthConfig
from .manifest import RunManifest, Thresholds

__all__ = [
    "AnalysisWindow",
    "CommentRecord",
    "PostRecord",
    "AuthorCategoryCounts",
    "AuthorSummary",
    "BasicStats",
    "BurstinessOverview",
    "CyborgReport",
    "IngestDiagnostics",
    "LifecycleCounts",
    "LimelightSummary",
    "MayflyReport",
    "OneCommentAgeReport",
    "GroundTruth",
    "SynthConfig",
    "RunManifest",
    "Thresholds",
]
