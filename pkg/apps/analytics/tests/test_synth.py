import json

import pytest

from app.metrics.report import ReportWriter
from app.schemas.pydantic.records import AnalysisWindow
from app.schemas.pydantic.synth import (
    BurstyAuthorSpec,
    ControversialPlant,
    CyborgPlant,
    IntervalLaw,
    LifecyclePlant,
    LimelightPlant,
    PostKind,
    SynthConfig,
)
from app.services import synth_service
from app.services.controversy_service import score_posts
from app.services.cyborg_service import is_cyborg_like
from app.services.exceptions import InvalidConfig
from app.services.ingest_service import build_corpus, ingest_files
from app.services.lifecycle_service import classify_popular_posts
from app.services.temporal_service import author_posting_burstiness
from app.services.tree_service import tree_metrics_for_corpus


def _corpus(synth):
    window = AnalysisWindow(start_utc=synth.truth.window_start_utc, end_utc=synth.truth.window_end_utc)
    return build_corpus(synth.posts, synth.comments, window)


def test_three_cyborg_posts_in_ten():
    synth = synth_service.generate(SynthConfig(seed=1, n_posts=10, cyborg=CyborgPlant(n_successful=2, n_unsuccessful=1)))
    corpus = _corpus(synth)
    planted = synth.truth.post_ids(cyborg_like=True)
    assert len(planted) == 3
    detected = sorted(
        post_id for post_id, post in corpus.posts.items()
        if is_cyborg_like(post, corpus.comments_for(post_id)).is_cyborg_like
    )
    assert detected == planted
    assert len(synth.truth.post_ids(kind=PostKind.CYBORG, successful=True)) == 2


def test_filler_text_has_exact_length():
    generator = synth_service.CorpusGenerator(SynthConfig(seed=5, n_posts=0))
    lengths = [len(generator._text(n)) for n in range(1, 300) for _ in range(3)]
    assert lengths == [n for n in range(1, 300) for _ in range(3)]


def test_cyborg_comments_one_char_over_the_limit_are_detected():
    config = SynthConfig(seed=9, n_posts=120, cyborg=CyborgPlant(n_successful=100, comment_chars=101))
    synth = synth_service.generate(config)
    corpus = _corpus(synth)
    detected = sorted(
        post_id for post_id, post in corpus.posts.items()
        if is_cyborg_like(post, corpus.comments_for(post_id)).is_cyborg_like
    )
    assert len(detected) == 100
    assert detected == synth.truth.post_ids(cyborg_like=True)


def test_same_seed_is_byte_identical(tmp_path):
    config = SynthConfig(seed=5, n_posts=50, cyborg=CyborgPlant(n_successful=2, n_short=2))
    paths = []
    for name in ("a", "b"):
        writer = ReportWriter(tmp_path / name)
        paths.append(synth_service.write_corpus(synth_service.generate(config), writer))
    for left, right in zip(*paths):
        assert left.read_bytes() == right.read_bytes()
    other = synth_service.generate(config.model_copy(update={"seed": 6}))
    assert [p.to_json_line() for p in other.posts] != (tmp_path / "a" / synth_service.POSTS_FILE).read_text().splitlines()


def test_output_parses_without_skipped_lines(tmp_path):
    config = SynthConfig(seed=3, n_posts=80, controversial=ControversialPlant(n_posts=5))
    writer = ReportWriter(tmp_path)
    synth_service.write_corpus(synth_service.generate(config), writer)
    truth = json.loads((tmp_path / synth_service.GROUND_TRUTH_FILE).read_text())
    window = AnalysisWindow(start_utc=truth["window_start_utc"], end_utc=truth["window_end_utc"])
    corpus = ingest_files(
        [tmp_path / synth_service.POSTS_FILE], [tmp_path / synth_service.COMMENTS_FILE], window, show_progress=False
    )
    diag = corpus.diagnostics
    assert diag.malformed_posts == diag.malformed_comments == 0
    assert diag.orphan_comments == 0
    assert diag.num_comments_mismatch == 0
    assert len(corpus.posts) == 80


def test_limelight_plant_hits_target():
    config = SynthConfig(seed=9, n_posts=20, limelight=LimelightPlant(targets=[0.6, 0.35], n_hog_same_author=1))
    synth = synth_service.generate(config)
    rows = {r.post_id: r for r in tree_metrics_for_corpus(_corpus(synth))}
    for truth in synth.truth.posts:
        if truth.kind is PostKind.LIMELIGHT:
            row = rows[truth.post_id]
            assert abs(row.limelight_score - truth.limelight_target) <= 0.01
            assert row.hog_is_post_author == truth.hog_is_post_author


def test_controversial_and_lifecycle_plants():
    config = SynthConfig(
        seed=4,
        n_posts=40,
        lifecycle=LifecyclePlant(n_early=1, n_steady=1, n_late=1, n_comments=40),
        controversial=ControversialPlant(n_posts=4),
    )
    synth = synth_service.generate(config)
    corpus = _corpus(synth)
    hot = sorted(p.post_id for p in score_posts(corpus) if p.is_controversial())
    assert hot == synth.truth.post_ids(controversial=True)
    rows, _ = classify_popular_posts(corpus, min_comments=40)
    assert {r.post_id: r.evolution_class.value for r in rows} == {
        t.post_id: t.lifecycle_class for t in synth.truth.posts if t.lifecycle_class
    }


def test_regular_bursty_author():
    config = SynthConfig(seed=2, n_posts=150, bursty_authors=[BurstyAuthorSpec(law=IntervalLaw.REGULAR, n_posts=100)])
    synth = synth_service.generate(config)
    summary = author_posting_burstiness(_corpus(synth), min_posts=100)
    assert summary.results["bursty_0000"].b == -1.0
    assert synth.truth.authors[0].law is IntervalLaw.REGULAR


@pytest.mark.parametrize(
    "config",
    [
        SynthConfig(n_posts=2, cyborg=CyborgPlant(n_successful=3)),
        SynthConfig(limelight=LimelightPlant(targets=[1.5])),
        SynthConfig(controversial=ControversialPlant(n_posts=1, n_comments=20, deleted_fraction=0.2)),
        SynthConfig(cyborg=CyborgPlant(n_successful=1, comment_chars=80)),
        SynthConfig(window_days=30, lifecycle=LifecyclePlant(n_early=1)),
        SynthConfig(limelight=LimelightPlant(targets=[0.5], n_comments=9000)),
    ],
)
def test_invalid_configs(config):
    with pytest.raises(InvalidConfig):
        synth_service.generate(config)


def test_load_config_rejects_unknown_keys(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"seed": 1, "n_post": 3}))
    with pytest.raises(InvalidConfig):
        synth_service.load_config(path)
    path.write_text(json.dumps({"seed": 1, "n_posts": 3}))
    assert synth_service.load_config(path).n_posts == 3


@pytest.mark.slow
def test_planted_behaviors_recovered_at_scale():
    config = SynthConfig(
        seed=2024,
        n_posts=10_000,
        n_authors=2000,
        background_comments_mean=20.0,
        cyborg=CyborgPlant(n_successful=60, n_unsuccessful=40, n_short=30, n_link=20, n_other_author=50),
        lifecycle=LifecyclePlant(n_early=10, n_steady=10, n_late=10),
        limelight=LimelightPlant(targets=[0.1, 0.25, 0.5, 0.6, 0.9, 1.0], n_hog_same_author=2),
        controversial=ControversialPlant(n_posts=150),
    )
    synth = synth_service.generate(config)
    assert len(synth.posts) >= 10_000
    assert len(synth.comments) >= 200_000
    corpus = _corpus(synth)

    cyborg = sorted(
        post_id for post_id, post in corpus.posts.items()
        if is_cyborg_like(post, corpus.comments_for(post_id)).is_cyborg_like
    )
    assert cyborg == synth.truth.post_ids(cyborg_like=True)

    rows, _ = classify_popular_posts(corpus)
    assert {r.post_id: r.evolution_class.value for r in rows} == {
        t.post_id: t.lifecycle_class for t in synth.truth.posts if t.lifecycle_class
    }

    hot = sorted(p.post_id for p in score_posts(corpus) if p.is_controversial())
    assert hot == synth.truth.post_ids(controversial=True)

    trees = {r.post_id: r for r in tree_metrics_for_corpus(corpus)}
    for truth in synth.truth.posts:
        if truth.kind is PostKind.LIMELIGHT:
            assert abs(trees[truth.post_id].limelight_score - truth.limelight_target) <= 0.01


def test_large_limelight_plant_stays_inside_a_short_window():
    config = SynthConfig(
        seed=4, n_posts=3, window_days=3, limelight=LimelightPlant(targets=[0.4], n_comments=8000)
    )
    synth = synth_service.generate(config)
    assert all(c.created_utc < synth.truth.window_end_utc for c in synth.comments)
    (truth,) = synth.truth.post_ids(kind=PostKind.LIMELIGHT)
    rows = {r.post_id: r for r in tree_metrics_for_corpus(_corpus(synth))}
    assert rows[truth].n_comments == 8000
    assert rows[truth].limelight_score == 0.4
