"""`reddit-analytics` command line front end.

Every analysis subcommand ingests the dumps once, writes its artifacts into a
staging directory next to ``--out`` and publishes them only on success.
"""
from __future__ import annotations

import json
import logging
import sys
import time
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import click

from app.core.config import settings, setup_logging
from app.core.error_codes import to_error_payload
from app.metrics.report import staged_output
from app.schemas.pydantic.manifest import RunManifest, Thresholds
from app.schemas.pydantic.records import AnalysisWindow
from app.schemas.pydantic.synth import SynthConfig
from app.services import synth_service
from app.services.ingest_service import ingest_files
from app.services.pipeline_service import ANALYSES, run_analyses

logger = logging.getLogger(__name__)

MANIFEST_FILE = "run_manifest.json"

_PATH = click.Path(exists=True, dir_okay=False, path_type=Path)
_FRACTION = click.FloatRange(0.0, 1.0)
_SECONDS = click.IntRange(min=0)
_COUNT = click.IntRange(min=0)


def _fail(exc: BaseException) -> None:
    status, payload = to_error_payload(exc)
    logger.debug("command failed", exc_info=exc)
    click.echo(json.dumps(payload, sort_keys=True), err=True)
    sys.exit(status)


def input_options(func: Callable[..., Any]) -> Callable[..., Any]:
    decorators = [
        click.option("--posts", "posts", multiple=True, required=True, type=_PATH,
                     help="Post dump (.jsonl, .zst or .gz); repeatable."),
        click.option("--comments", "comments", multiple=True, required=True, type=_PATH,
                     help="Comment dump (.jsonl, .zst or .gz); repeatable."),
        click.option("--window-start", type=int, required=True, help="Window start, UNIX seconds (inclusive)."),
        click.option("--window-end", type=int, required=True, help="Window end, UNIX seconds (exclusive)."),
        click.option("--out", "out", type=click.Path(file_okay=False, path_type=Path), required=True,
                     help="Output directory."),
        click.option("--shards", type=click.IntRange(min=1), default=settings.DEFAULT_SHARDS,
                     show_default=True, help="Parallel parsing shards."),
        click.option("--timing", is_flag=True, help="Record wall time and shard count in the manifest."),
    ]
    for decorator in reversed(decorators):
        func = decorator(func)
    return func


# option name -> (Thresholds field, click type, default, help)
_THRESHOLD_OPTIONS: Dict[str, tuple] = {
    "--mayfly-threshold": ("mayfly_threshold_seconds", _SECONDS, settings.MAYFLY_THRESHOLD_SECONDS,
                           "Mayfly age threshold in seconds."),
    "--bins-per-decade": ("bins_per_decade", click.IntRange(min=1), settings.AGE_BINS_PER_DECADE,
                          "Log bins per decade for age histograms."),
    "--quick-age": ("one_comment_quick_age_seconds", _SECONDS, settings.ONE_COMMENT_QUICK_AGE_SECONDS,
                    "Age threshold for one-comment posts."),
    "--lifecycle-fraction": ("lifecycle_fraction", click.FloatRange(0.0, 1.0, min_open=True),
                             settings.LIFECYCLE_FRACTION, "Comment fraction that fixes t75."),
    "--early-seconds": ("early_seconds", _SECONDS, settings.LIFECYCLE_EARLY_SECONDS,
                        "Early bloomer boundary."),
    "--late-seconds": ("late_seconds", _SECONDS, settings.LIFECYCLE_LATE_SECONDS,
                       "Late bloomer boundary."),
    "--popular-min-comments": ("popular_min_comments", click.IntRange(min=1), settings.POPULAR_MIN_COMMENTS,
                               "Comments a post needs for lifecycle and limelight analysis."),
    "--latency-max": ("latency_max_seconds", _SECONDS, settings.CYBORG_LATENCY_MAX_SECONDS,
                      "Max first-comment latency of a cyborg-like post."),
    "--min-chars": ("min_chars", _COUNT, settings.CYBORG_MIN_CHARS,
                    "First comment must be longer than this."),
    "--hog-threshold": ("hog_threshold", _FRACTION, settings.LIMELIGHT_HOG_THRESHOLD,
                        "Limelight score counted as hogging."),
    "--burst-min-posts": ("burst_min_author_posts", click.IntRange(min=2), settings.BURST_MIN_AUTHOR_POSTS,
                          "Posts an author needs for posting burstiness."),
    "--burst-min-comments": ("burst_min_author_comments", click.IntRange(min=2),
                             settings.BURST_MIN_AUTHOR_COMMENTS,
                             "Comments an author needs for commenting burstiness."),
    "--burst-min-post-comments": ("burst_min_post_comments", click.IntRange(min=2),
                                  settings.BURST_MIN_POST_COMMENTS,
                                  "Comments a post needs for post burstiness."),
    "--theta": ("theta", _FRACTION, settings.CONTROVERSY_THETA,
                "A post is controversial above this deleted fraction."),
    "--min-comments": ("controversy_min_comments", click.IntRange(min=1), settings.CONTROVERSY_MIN_COMMENTS,
                       "Comments a post needs for the controversy scatter."),
    "--min-subreddit-posts": ("min_subreddit_posts", click.IntRange(min=1),
                              settings.CONTROVERSY_MIN_SUBREDDIT_POSTS,
                              "Scored posts a subreddit needs (inclusive)."),
    "--min-author-posts": ("min_author_posts", _COUNT, settings.CONTROVERSY_MIN_AUTHOR_POSTS,
                           "Scored posts an author needs (strictly more)."),
}

_OPTIONS_BY_ANALYSIS: Dict[str, List[str]] = {
    "stats": [],
    "lifecycle": ["--mayfly-threshold", "--bins-per-decade", "--quick-age", "--lifecycle-fraction",
                  "--early-seconds", "--late-seconds", "--popular-min-comments"],
    "cyborg": ["--latency-max", "--min-chars"],
    "tree": ["--popular-min-comments", "--hog-threshold"],
    "burstiness": ["--burst-min-posts", "--burst-min-comments", "--burst-min-post-comments"],
    "authors": [],
    "controversy": ["--theta", "--min-comments", "--min-subreddit-posts", "--min-author-posts"],
}


def threshold_options(names: Sequence[str]) -> Callable[[Callable[..., Any]], Callable[..., Any]]:
    def wrap(func: Callable[..., Any]) -> Callable[..., Any]:
        for flag in reversed(list(dict.fromkeys(names))):
            field, kind, default, help_text = _THRESHOLD_OPTIONS[flag]
            func = click.option(flag, field, type=kind, default=default, show_default=True,
                                help=help_text)(func)
        return func

    return wrap


def _execute(command: str, analyses: Sequence[str], params: Dict[str, Any]) -> None:
    started = time.perf_counter()
    try:
        window = AnalysisWindow(start_utc=params["window_start"], end_utc=params["window_end"])
        thresholds = Thresholds(**{k: v for k, v in params.items() if k in Thresholds.model_fields})
        corpus = ingest_files(params["posts"], params["comments"], window, shards=params["shards"])
        with staged_output(params["out"]) as writer:
            report = run_analyses(analyses, corpus, thresholds, writer)
            manifest = RunManifest(
                command=command,
                posts=[str(p) for p in params["posts"]],
                comments=[str(p) for p in params["comments"]],
                window_start_utc=window.start_utc,
                window_end_utc=window.end_utc,
                out_dir=str(params["out"]),
                thresholds=thresholds,
                counts=dict(sorted(report.counters.items())),
                outputs=sorted(p.name for p in writer.written) + [MANIFEST_FILE],
            )
            if params["timing"]:
                manifest.shards = params["shards"]
                manifest.wall_seconds = round(time.perf_counter() - started, 3)
            writer.write_json(MANIFEST_FILE, manifest)
    except click.ClickException:
        raise
    except Exception as exc:
        _fail(exc)
    logger.info("%s finished, outputs in %s", command, params["out"])


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(package_name="reddit-behavior-analytics")
def cli() -> None:
    """Behavioral analytics over Reddit-style post/comment dumps."""
    setup_logging()


def _analysis_command(name: str, analyses: Sequence[str], flags: Sequence[str], doc: str) -> None:
    def command(**params: Any) -> None:
        _execute(name, analyses, params)

    command.__doc__ = doc
    command = threshold_options(flags)(command)
    command = input_options(command)
    cli.command(name=name)(command)


for _name, _doc in (
    ("stats", "Basic corpus statistics and ingest diagnostics."),
    ("lifecycle", "Post ages, Mayfly fraction and popular-post lifecycle classes."),
    ("cyborg", "Cyborg-like posts detected from the first comment."),
    ("tree", "Depth, breadth and limelight of every discussion tree."),
    ("burstiness", "Burstiness of author posting, author commenting and post comments."),
    ("authors", "Author categories, interaction graph and interaction scores."),
    ("controversy", "Deletion-based controversiality of posts, subreddits and authors."),
):
    _analysis_command(_name, [_name], _OPTIONS_BY_ANALYSIS[_name], _doc)

_analysis_command(
    "all",
    list(ANALYSES),
    [flag for flags in _OPTIONS_BY_ANALYSIS.values() for flag in flags],
    "Run every analysis over one ingestion.",
)


@cli.command()
@click.option("--config", "config_path", type=_PATH, default=None, help="SynthConfig JSON file.")
@click.option("--seed", type=int, default=None, help="Override the config seed.")
@click.option("--n-posts", type=click.IntRange(min=0), default=None, help="Override the post count.")
@click.option("--out", "out", type=click.Path(file_okay=False, path_type=Path), required=True)
def synth(config_path: Optional[Path], seed: Optional[int], n_posts: Optional[int], out: Path) -> None:
    """Generate a seeded synthetic corpus with planted behaviors."""
    try:
        config = synth_service.load_config(config_path) if config_path else SynthConfig()
        overrides = {k: v for k, v in (("seed", seed), ("n_posts", n_posts)) if v is not None}
        if overrides:
            config = SynthConfig.model_validate({**config.model_dump(), **overrides})
        corpus = synth_service.generate(config)
        with staged_output(out) as writer:
            synth_service.write_corpus(corpus, writer)
            manifest = RunManifest(
                command="synth",
                out_dir=str(out),
                counts={"posts": len(corpus.posts), "comments": len(corpus.comments)},
                outputs=sorted(p.name for p in writer.written) + [MANIFEST_FILE],
            )
            writer.write_json(MANIFEST_FILE, manifest)
    except click.ClickException:
        raise
    except Exception as exc:
        _fail(exc)


def main() -> None:
    cli(prog_name="reddit-analytics")


if __name__ == "__main__":
    main()
