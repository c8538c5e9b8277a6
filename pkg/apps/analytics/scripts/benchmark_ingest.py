"""Ingest throughput benchmark on a synthetic dump.

Run inside the analytics directory:

    python scripts/benchmark_ingest.py --comments 1000000 --shards 4

Generates a seeded corpus of roughly the requested comment count, writes it
to a scratch directory, then times ``ingest_files`` plus ``corpus_stats``.
Exits non-zero when throughput falls below ``--min-rate`` records/s.
"""
from __future__ import annotations

import logging
import sys
import tempfile
import time
from pathlib import Path

import click

ANALYTICS_ROOT = Path(__file__).resolve().parent.parent
if str(ANALYTICS_ROOT) not in sys.path:
    sys.path.insert(0, str(ANALYTICS_ROOT))

from app.core.config import setup_logging  # noqa: E402
from app.metrics.report import staged_output  # noqa: E402
from app.schemas.pydantic.records import AnalysisWindow  # noqa: E402
from app.schemas.pydantic.synth import SynthConfig  # noqa: E402
from app.services import synth_service  # noqa: E402
from app.services.ingest_service import corpus_stats, ingest_files  # noqa: E402

logger = logging.getLogger("benchmark_ingest")


@click.command()
@click.option("--comments", "n_comments", type=click.IntRange(min=1), default=1_000_000, show_default=True)
@click.option("--shards", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--seed", type=int, default=7, show_default=True)
@click.option("--min-rate", type=float, default=100_000.0, show_default=True,
              help="Required records per second.")
def main(n_comments: int, shards: int, seed: int, min_rate: float) -> None:
    setup_logging()
    config = SynthConfig(seed=seed, n_posts=max(10, n_comments // 8), background_comments_mean=8.0)
    with tempfile.TemporaryDirectory(prefix="reddit-bench-") as scratch:
        out = Path(scratch) / "dump"
        corpus = synth_service.generate(config)
        with staged_output(out) as writer:
            synth_service.write_corpus(corpus, writer)
        n_records = len(corpus.posts) + len(corpus.comments)
        del corpus
        logger.info("generated %d records", n_records)

        window = AnalysisWindow(start_utc=config.window_start_utc, end_utc=config.window_end_utc)
        started = time.perf_counter()
        built = ingest_files(
            [out / synth_service.POSTS_FILE],
            [out / synth_service.COMMENTS_FILE],
            window,
            shards=shards,
            show_progress=False,
        )
        stats = corpus_stats(built)
        elapsed = time.perf_counter() - started

    rate = n_records / elapsed if elapsed > 0 else float("inf")
    logger.info("ingested %d posts, %d comments in %.2fs", stats.n_posts, stats.n_comments, elapsed)
    click.echo(f"{rate:,.0f} records/s on {shards} shard(s)")
    if rate < min_rate:
        logger.error("throughput %.0f below required %.0f records/s", rate, min_rate)
        sys.exit(1)


if __name__ == "__main__":  # pragma: no cover
    main()
