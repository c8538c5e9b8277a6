from __future__ import annotations

from typing import Optional

from typing_extensions import Self

from pydantic import BaseModel, ConfigDict, Field, computed_field


def _ratio(numerator: int, denominator: int) -> Optional[float]:
    return numerator / denominator if denominator else None


class _CounterModel(BaseModel):
    """Flat bag of non-negative counters; `+` merges two shards field-wise."""

    model_config = ConfigDict(frozen=True)

    def __add__(self, other: Self) -> Self:
        if type(other) is not type(self):
            return NotImplemented
        return type(self)(
            **{name: getattr(self, name) + getattr(other, name) for name in type(self).model_fields}
        )


class BasicStats(_CounterModel):
    n_posts: int = Field(0, ge=0)
    n_deleted_author_posts: int = Field(0, ge=0)
    n_zero_comment_posts: int = Field(0, ge=0)
    n_one_comment_posts: int = Field(0, ge=0)
    n_comments: int = Field(0, ge=0)
    n_comments_on_period_posts: int = Field(0, ge=0)
    n_disconnected_posts: int = Field(0, ge=0)
    n_removed_comments: int = Field(0, ge=0)


class IngestDiagnostics(_CounterModel):
    malformed_posts: int = 0
    malformed_comments: int = 0
    malformed_json: int = 0
    missing_field: int = 0
    bad_prefix: int = 0
    invalid_field: int = 0
    duplicate_posts: int = 0
    duplicate_comments: int = 0
    posts_outside_window: int = 0
    comments_outside_window: int = 0
    comments_on_off_period_posts: int = 0
    orphan_comments: int = 0
    num_comments_mismatch: int = 0


class CyborgReport(_CounterModel):
    posts_first_comment_within_6s: int = 0
    posts_same_author_first_comment: int = 0
    cyborg_like_posts: int = 0
    successful_cyborg: int = 0
    unsuccessful_cyborg: int = 0
    successful_non_cyborg: int = 0
    unsuccessful_non_cyborg: int = 0
    # complement partition: fast posts whose first comment comes from someone else
    successful_other_author: int = 0
    unsuccessful_other_author: int = 0
    automoderator_first_comments: int = 0

    @computed_field  # type: ignore[prop-decorator]
    @property
    def cyborg_success_rate(self) -> Optional[float]:
        return _ratio(self.successful_cyborg, self.cyborg_like_posts)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def non_cyborg_success_rate(self) -> Optional[float]:
        return _ratio(
            self.successful_non_cyborg, self.successful_non_cyborg + self.unsuccessful_non_cyborg
        )

    @computed_field  # type: ignore[prop-decorator]
    @property
    def other_author_success_rate(self) -> Optional[float]:
        return _ratio(
            self.successful_other_author,
            self.successful_other_author + self.unsuccessful_other_author,
        )


class MayflyReport(BaseModel):
    threshold_seconds: int
    n_posts: int
    n_aged_posts: int
    n_within_threshold: int
    clock_skew_clamped: int = 0

    @computed_field  # type: ignore[prop-decorator]
    @property
    def fraction_of_aged_posts(self) -> Optional[float]:
        return _ratio(self.n_within_threshold, self.n_aged_posts)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def fraction_of_all_posts(self) -> Optional[float]:
        return _ratio(self.n_within_threshold, self.n_posts)


class OneCommentAgeReport(BaseModel):
    threshold_seconds: int
    n_one_comment_posts: int
    n_within_threshold: int

    @computed_field  # type: ignore[prop-decorator]
    @property
    def fraction_within_threshold(self) -> Optional[float]:
        return _ratio(self.n_within_threshold, self.n_one_comment_posts)


class LifecycleCounts(BaseModel):
    min_comments: int
    early_bloomers: int = 0
    steady: int = 0
    late_bloomers: int = 0


class LimelightSummary(BaseModel):
    min_comments: int
    hog_threshold: float
    n_posts: int
    n_at_or_above_threshold: int
    n_hog_differs_from_post_author: int
    n_posts_with_orphans: int = 0

    @computed_field  # type: ignore[prop-decorator]
    @property
    def fraction_at_or_above_threshold(self) -> Optional[float]:
        return _ratio(self.n_at_or_above_threshold, self.n_posts)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def fraction_hog_differs_from_post_author(self) -> Optional[float]:
        return _ratio(self.n_hog_differs_from_post_author, self.n_posts)


class BurstinessOverview(BaseModel):
    kind: str
    min_events: int
    n_qualifying: int
    n_degenerate_skipped: int
    mean_b: Optional[float] = None


class AuthorCategoryCounts(_CounterModel):
    producers_only: int = 0
    consumers_only: int = 0
    both: int = 0
    total_active: int = 0


class AuthorSummary(BaseModel):
    categories: AuthorCategoryCounts
    n_with_posts: int
    less_than_one_per_post: int
    exactly_one_per_post: int
    more_than_one_per_post: int
    n_scored_authors: int
    interaction_score_zero: int
    interaction_score_half: int
    interaction_score_one: int
    graph_edges: int
    graph_total_weight: int
