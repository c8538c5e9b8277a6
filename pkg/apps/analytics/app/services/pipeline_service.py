"""Artifact writers behind each CLI subcommand.

Every writer takes the built corpus, the run thresholds and a ReportWriter,
writes its CSV/JSON files and folds its counters, histograms and per-entity
scores into the run's MetricReport.
"""
from __future__ import annotations

import logging
from typing import Callable, Dict, Sequence

from app.metrics.report import MetricReport, ReportWriter
from app.schemas.pydantic.manifest import Thresholds
from . import (
    authors_service,
    controversy_service,
    cyborg_service,
    lifecycle_service,
    temporal_service,
    tree_service,
)
from .ingest_service import Corpus, corpus_stats

logger = logging.getLogger(__name__)

Analysis = Callable[[Corpus, Thresholds, ReportWriter, MetricReport], None]

HISTOGRAM_HEADER = ("bin_lo", "bin_hi", "count", "density")
SCORE_HISTOGRAM_HEADER = ("bin_lo", "bin_hi", "count")
METRIC_REPORT_FILE = "metric_report.json"


def write_stats(
    corpus: Corpus, thresholds: Thresholds, writer: ReportWriter, report: MetricReport
) -> None:
    stats = corpus_stats(corpus)
    writer.write_json("basic_stats.json", stats)
    writer.write_json("ingest_diagnostics.json", corpus.diagnostics)
    report.add_counters("stats", stats)
    report.add_counters("ingest", corpus.diagnostics)


def write_lifecycle(
    corpus: Corpus, thresholds: Thresholds, writer: ReportWriter, report: MetricReport
) -> None:
    spec = lifecycle_service.default_age_spec(thresholds.bins_per_decade)
    mayfly = lifecycle_service.mayfly_report(corpus, thresholds.mayfly_threshold_seconds)
    ages = lifecycle_service.age_histogram(corpus, spec)
    writer.write_json("mayfly.json", mayfly)
    writer.write_csv(
        "age_histogram.csv",
        HISTOGRAM_HEADER,
        ((r.bin_lo, r.bin_hi, r.count, r.density) for r in ages.rows()),
    )

    rows, counts = lifecycle_service.classify_popular_posts(
        corpus,
        p=thresholds.lifecycle_fraction,
        t_early=thresholds.early_seconds,
        t_late=thresholds.late_seconds,
        min_comments=thresholds.popular_min_comments,
    )
    writer.write_csv(
        "lifecycle.csv", lifecycle_service.LIFECYCLE_CSV_HEADER, (r.csv_row() for r in rows)
    )
    one_report, one_hist = lifecycle_service.one_comment_ages(
        corpus, thresholds.one_comment_quick_age_seconds, spec
    )
    writer.write_json("lifecycle_summary.json", {"classes": counts, "one_comment_posts": one_report})
    writer.write_csv(
        "one_comment_age_histogram.csv",
        HISTOGRAM_HEADER,
        ((r.bin_lo, r.bin_hi, r.count, r.density) for r in one_hist.rows()),
    )
    writer.write_csv(
        "growth_curves.csv",
        ("post_id", "elapsed_seconds", "cumulative_fraction"),
        lifecycle_service.growth_curves(corpus, thresholds.popular_min_comments),
    )
    writer.write_csv(
        "comments_vs_age.csv",
        ("bin_lo", "bin_hi", "n_posts", "mean_comments"),
        lifecycle_service.comments_vs_age(corpus, spec),
    )
    report.add_counters("mayfly", mayfly)
    report.add_counters("lifecycle", counts)
    report.add_counters("one_comment", one_report)
    report.histograms["age"] = ages
    report.histograms["one_comment_age"] = one_hist


def write_cyborg(
    corpus: Corpus, thresholds: Thresholds, writer: ReportWriter, report: MetricReport
) -> None:
    counts, verdicts = cyborg_service.cyborg_report(
        corpus, thresholds.latency_max_seconds, thresholds.min_chars
    )
    writer.write_csv(
        "cyborg_posts.csv", cyborg_service.CYBORG_CSV_HEADER, (v.csv_row() for v in verdicts)
    )
    writer.write_json("cyborg_report.json", counts)
    report.add_counters("cyborg", counts)

    spec = lifecycle_service.default_age_spec(thresholds.bins_per_decade)
    for group, hist in cyborg_service.fast_post_age_histograms(verdicts, spec).items():
        writer.write_csv(
            f"fast_post_age_histogram_{group}.csv",
            HISTOGRAM_HEADER,
            ((r.bin_lo, r.bin_hi, r.count, r.density) for r in hist.rows()),
        )
        report.histograms[f"fast_post_age_{group}"] = hist


def write_tree(
    corpus: Corpus, thresholds: Thresholds, writer: ReportWriter, report: MetricReport
) -> None:
    rows = tree_service.tree_metrics_for_corpus(corpus)
    writer.write_csv("tree_metrics.csv", tree_service.TREE_CSV_HEADER, (r.csv_row() for r in rows))
    writer.write_csv(
        "depth_breadth.csv",
        ("depth", "breadth", "count"),
        tree_service.depth_breadth_histogram(rows),
    )
    summary, hist = tree_service.limelight_summary(
        rows, thresholds.popular_min_comments, thresholds.hog_threshold
    )
    writer.write_csv(
        "limelight_histogram.csv", ("bin_lo", "bin_hi", "count", "cdf"), hist.rows(with_cdf=True)
    )
    writer.write_json("limelight_summary.json", summary)
    report.add_counters("limelight", summary)
    report.counters["tree.orphan_comments"] += sum(r.n_orphans for r in rows)
    report.histograms["limelight"] = hist
    report.scores["limelight"] = {
        r.post_id: r.limelight_score for r in rows if r.limelight_score is not None
    }


def write_burstiness(
    corpus: Corpus, thresholds: Thresholds, writer: ReportWriter, report: MetricReport
) -> None:
    summaries = [
        temporal_service.author_posting_burstiness(corpus, thresholds.burst_min_author_posts),
        temporal_service.author_commenting_burstiness(corpus, thresholds.burst_min_author_comments),
        temporal_service.post_comment_burstiness(corpus, thresholds.burst_min_post_comments),
    ]
    writer.write_csv(
        "burstiness_entities.csv",
        temporal_service.BURSTINESS_CSV_HEADER,
        [row for s in summaries for row in s.rows()],
    )
    for s in summaries:
        name = s.kind.value.replace("-", "_")
        writer.write_csv(
            f"burstiness_histogram_{name}.csv", SCORE_HISTOGRAM_HEADER, s.histogram.rows()
        )
        report.histograms[f"burstiness_{name}"] = s.histogram
        report.scores[f"burstiness_{name}"] = {o: r.b for o, r in s.results.items()}
        report.add_counters(f"burstiness_{name}", s.overview())
    writer.write_json("burstiness_summary.json", {s.kind.value: s.overview() for s in summaries})


def write_authors(
    corpus: Corpus, thresholds: Thresholds, writer: ReportWriter, report: MetricReport
) -> None:
    graph = authors_service.build_interaction_graph(corpus)
    profiles = authors_service.build_profiles(corpus, graph)
    rows = [authors_service.author_row(profiles[a]) for a in sorted(profiles)]
    writer.write_csv("authors.csv", authors_service.AUTHORS_CSV_HEADER, rows)
    writer.write_csv("interaction_edges.csv", authors_service.EDGES_CSV_HEADER, graph.rows())
    summary, hist = authors_service.author_summary(profiles, graph)
    writer.write_csv("interaction_score_histogram.csv", SCORE_HISTOGRAM_HEADER, hist.rows())
    writer.write_json("author_summary.json", summary)
    report.add_counters("authors", summary)
    report.add_counters("authors.categories", summary.categories)
    report.histograms["interaction_score"] = hist
    report.scores["interaction_score"] = {
        str(row[0]): float(row[5]) for row in rows if row[5] is not None  # type: ignore[arg-type]
    }


def write_controversy(
    corpus: Corpus, thresholds: Thresholds, writer: ReportWriter, report: MetricReport
) -> None:
    scored = controversy_service.score_posts(corpus)
    scatter = controversy_service.controversy_scatter(
        corpus, thresholds.controversy_min_comments, scored
    )
    writer.write_csv("controversy_scatter.csv", controversy_service.SCATTER_CSV_HEADER, scatter)
    writer.write_csv(
        "subreddit_controversy.csv",
        ("subreddit", *controversy_service.ROLLUP_CSV_HEADER_TAIL, "popularity_category"),
        controversy_service.subreddit_table(scored, thresholds.min_subreddit_posts, thresholds.theta),
    )
    writer.write_csv(
        "author_controversy.csv",
        ("author", *controversy_service.ROLLUP_CSV_HEADER_TAIL),
        controversy_service.author_table(scored, thresholds.min_author_posts, thresholds.theta),
    )
    report.counters["controversy.scatter_posts"] += len(scatter)
    report.counters["controversy.controversial_posts"] += sum(
        1 for p in scored if p.is_controversial(thresholds.theta)
    )
    report.scores["controversy"] = {p.post_id: p.score for p in scored if p.score is not None}  # type: ignore[misc]


ANALYSES: Dict[str, Analysis] = {
    "stats": write_stats,
    "lifecycle": write_lifecycle,
    "cyborg": write_cyborg,
    "tree": write_tree,
    "burstiness": write_burstiness,
    "authors": write_authors,
    "controversy": write_controversy,
}


def run_analyses(
    names: Sequence[str], corpus: Corpus, thresholds: Thresholds, writer: ReportWriter
) -> MetricReport:
    report = MetricReport()
    for name in names:
        logger.info("running %s", name)
        ANALYSES[name](corpus, thresholds, writer, report)
    writer.write_json(METRIC_REPORT_FILE, report.to_dict())
    return report
