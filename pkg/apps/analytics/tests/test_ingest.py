import gzip
import json
import random

import pytest
import zstandard

from app.schemas.pydantic.records import AnalysisWindow
from app.services.exceptions import BadPrefix, MalformedJson, MissingField
from app.services.ingest_service import (
    CorpusBuilder,
    build_corpus,
    corpus_stats,
    ingest_files,
    parse_comment_line,
    parse_lines,
    parse_post_line,
    read_dump_lines,
)
from conftest import corpus_of, make_comment, make_post


def test_parse_post_line_maps_fields():
    line = '{"name":"t3_a1","author":"u1","created_utc":100,"num_comments":0,"subreddit":"s","score":1,"title":"t"}'
    post = parse_post_line(line)
    assert post.name == "t3_a1"
    assert post.author == "u1"
    assert post.created_utc == 100
    assert post.selftext == ""


def test_parse_post_line_missing_author_is_deleted_marker():
    post = parse_post_line('{"name":"t3_a2","created_utc":100,"extra_key":[1,2]}')
    assert post.author == "[deleted]"
    assert post.is_deleted_author


def test_parse_post_line_accepts_string_timestamp():
    assert parse_post_line('{"name":"t3_x","created_utc":"1420070400"}').created_utc == 1420070400


def test_parse_post_line_errors():
    with pytest.raises(MalformedJson):
        parse_post_line("{not json")
    with pytest.raises(MalformedJson):
        parse_post_line("[1, 2]")
    with pytest.raises(MissingField) as exc:
        parse_post_line('{"name":"t3_x"}')
    assert exc.value.field == "created_utc"
    with pytest.raises(BadPrefix):
        parse_post_line('{"name":"t1_x","created_utc":5}')


def test_parse_comment_line():
    line = '{"name":"t1_c1","author":"u2","created_utc":106,"link_id":"t3_a1","parent_id":"t3_a1","body":"hi","subreddit":"s","score":1}'
    comment = parse_comment_line(line)
    assert comment.link_id == "t3_a1"
    assert comment.is_top_level


def test_parse_comment_line_rejects_foreign_parent_prefix():
    with pytest.raises(BadPrefix) as exc:
        parse_comment_line('{"name":"t1_c","created_utc":5,"link_id":"t3_a","parent_id":"t5_x"}')
    assert exc.value.field == "parent_id"
    assert exc.value.code == "BAD_PREFIX"


def test_parse_comment_line_defaults_body():
    comment = parse_comment_line('{"name":"t1_c","created_utc":5,"link_id":"t3_a","parent_id":"t3_a"}')
    assert comment.body == ""


def test_build_corpus_keeps_in_window_comment():
    window = AnalysisWindow(start_utc=0, end_utc=1000)
    corpus = build_corpus([make_post("t3_p", 100)], [make_comment("t1_c", "t3_p", 200)], window)
    assert list(corpus.posts) == ["t3_p"]
    assert list(corpus.comments) == ["t1_c"]


def test_build_corpus_drops_comment_on_pre_window_post():
    corpus = build_corpus(
        [make_post("t3_old", 5, author="u9"), make_post("t3_p", 100)],
        [make_comment("t1_c", "t3_old", 200)],
        AnalysisWindow(start_utc=50, end_utc=1000),
    )
    stats = corpus_stats(corpus)
    assert corpus.comments == {}
    assert stats.n_comments - stats.n_comments_on_period_posts == 1
    assert corpus.diagnostics.comments_on_off_period_posts == 1
    # referenced post exists in the dump, so it is not disconnected
    assert stats.n_disconnected_posts == 0


def test_build_corpus_flags_orphans():
    posts = [make_post("t3_p", 100), make_post("t3_q", 100)]
    comments = [
        make_comment("t1_1", "t3_p", 110),
        make_comment("t1_2", "t3_p", 120, parent_id="t1_1"),
        make_comment("t1_3", "t3_p", 130, parent_id="t1_zzz"),
        make_comment("t1_4", "t3_q", 140, parent_id="t1_1"),  # parent lives on another post
        make_comment("t1_5", "t3_p", 150, parent_id="t3_q"),
    ]
    corpus = corpus_of(posts, comments)
    assert len(corpus.comments) == 5
    assert corpus.orphan_comments == frozenset({"t1_3", "t1_4", "t1_5"})
    assert corpus.diagnostics.orphan_comments == 3


def test_build_corpus_duplicates_keep_first_occurrence():
    first = make_post("t3_p", 100, author="first")
    second = make_post("t3_p", 100, author="second")
    corpus = build_corpus([first, second], [], AnalysisWindow(start_utc=0, end_utc=1000))
    assert corpus.posts["t3_p"].author == "first"
    assert corpus.diagnostics.duplicate_posts == 1


def test_disconnected_posts_count_unknown_link_ids():
    corpus = corpus_of(
        [make_post("t3_p")],
        [make_comment("t1_1", "t3_gone", 200), make_comment("t1_2", "t3_gone", 201)],
    )
    assert corpus_stats(corpus).n_disconnected_posts == 1


def test_corpus_stats_hand_count(five_row_lines):
    post_lines, comment_lines = five_row_lines
    corpus = parse_lines(post_lines, comment_lines).build(AnalysisWindow(start_utc=0, end_utc=1000))
    stats = corpus_stats(corpus)
    assert stats.n_posts == 3
    assert stats.n_deleted_author_posts == 1
    assert stats.n_zero_comment_posts == 1
    assert stats.n_one_comment_posts == 1
    assert stats.n_comments == 3
    assert stats.n_comments_on_period_posts == 3
    assert stats.n_removed_comments == 1
    # t3_a declares 0 and has 0, t3_b declares 0 and has 1
    assert corpus.diagnostics.num_comments_mismatch == 1


def test_corpus_stats_empty():
    stats = corpus_stats(corpus_of([]))
    assert stats.model_dump() == {k: 0 for k in stats.model_dump()}


def test_corpus_stats_merge_on_disjoint_corpora():
    a = corpus_of([make_post("t3_a"), make_post("t3_b", author="[deleted]")], [make_comment("t1_1", "t3_a", 150)])
    b = corpus_of([make_post("t3_c")], [make_comment("t1_2", "t3_c", 150), make_comment("t1_3", "t3_c", 160)])
    both = corpus_of(
        [make_post("t3_a"), make_post("t3_b", author="[deleted]"), make_post("t3_c")],
        [make_comment("t1_1", "t3_a", 150), make_comment("t1_2", "t3_c", 150), make_comment("t1_3", "t3_c", 160)],
    )
    assert corpus_stats(a) + corpus_stats(b) == corpus_stats(both)


def test_malformed_lines_are_counted_not_fatal(caplog):
    lines = [make_post("t3_a").to_json_line(), "{oops", '{"name":"t3_b"}', '{"name":"x","created_utc":1}']
    corpus = parse_lines(lines, []).build(AnalysisWindow(start_utc=0, end_utc=1000))
    diag = corpus.diagnostics
    assert list(corpus.posts) == ["t3_a"]
    assert diag.malformed_posts == 3
    assert (diag.malformed_json, diag.missing_field, diag.bad_prefix) == (1, 1, 1)
    assert "first at line 2" in caplog.text


def _random_dump(rng: random.Random):
    posts = [make_post(f"t3_{i:03d}", rng.randint(1, 2000), author=f"u{rng.randint(0, 9)}") for i in range(40)]
    comments = []
    for j in range(300):
        link = f"t3_{rng.randint(0, 45):03d}"
        parent = link if rng.random() < 0.4 or j == 0 else f"t1_{rng.randint(0, j):04d}"
        comments.append(make_comment(f"t1_{j:04d}", link, rng.randint(1, 2500), parent_id=parent))
    comments += comments[:10]  # duplicates
    return [p.to_json_line() for p in posts] + ["garbage"], [c.to_json_line() for c in comments]


def test_build_is_independent_of_line_order_and_shards():
    rng = random.Random(7)
    post_lines, comment_lines = _random_dump(rng)
    window = AnalysisWindow(start_utc=300, end_utc=1800)
    reference = parse_lines(post_lines, comment_lines).build(window)
    for shards in (2, 3, 8):
        assert parse_lines(post_lines, comment_lines, shards=shards).build(window) == reference
    shuffled_posts, shuffled_comments = post_lines[:], comment_lines[:]
    rng.shuffle(shuffled_posts)
    rng.shuffle(shuffled_comments)
    shuffled = parse_lines(shuffled_posts, shuffled_comments).build(window)
    assert shuffled.posts == reference.posts
    assert shuffled.comments == reference.comments
    assert shuffled.orphan_comments == reference.orphan_comments
    assert shuffled.diagnostics == reference.diagnostics


def test_window_soundness_fuzzed():
    rng = random.Random(11)
    post_lines, comment_lines = _random_dump(rng)
    builder = parse_lines(post_lines, comment_lines)
    violations = 0
    for _ in range(100):
        start = rng.randint(0, 2400)
        window = AnalysisWindow(start_utc=start, end_utc=start + rng.randint(1, 1500))
        corpus = builder.build(window)
        for comment in corpus.comments.values():
            if not window.contains(comment.created_utc) or comment.link_id not in corpus.posts:
                violations += 1
        for post in corpus.posts.values():
            violations += not window.contains(post.created_utc)
    assert violations == 0


@pytest.mark.parametrize("suffix", [".jsonl", ".gz", ".zst"])
def test_read_dump_lines_handles_compression(tmp_path, suffix):
    payload = "\n".join([json.dumps({"name": "t3_a", "created_utc": 5}), "", json.dumps({"name": "t3_b", "created_utc": 6})]) + "\n"
    path = tmp_path / f"posts{suffix}"
    data = payload.encode("utf-8")
    if suffix == ".gz":
        data = gzip.compress(data)
    elif suffix == ".zst":
        data = zstandard.ZstdCompressor().compress(data)
    path.write_bytes(data)
    lines = list(read_dump_lines([path], show_progress=False))
    assert len(lines) == 2
    assert parse_post_line(lines[1]).name == "t3_b"


def test_ingest_files(dump_files):
    posts, comments = dump_files
    corpus = ingest_files([posts], [comments], AnalysisWindow(start_utc=0, end_utc=1000), show_progress=False)
    assert sorted(corpus.posts) == ["t3_a", "t3_b", "t3_c"]
    assert [c.name for c in corpus.comments_for("t3_c")] == ["t1_2", "t1_3"]


def test_builder_merge_keeps_smallest_sequence_number():
    left, right = CorpusBuilder(), CorpusBuilder()
    right.add_post(make_post("t3_p", author="early"), seq=0)
    left.add_post(make_post("t3_p", author="late"), seq=5)
    for merged in (left.merge(right), right.merge(left)):
        assert merged.posts["t3_p"][1].author == "early"
        assert merged.duplicate_posts == 1


def test_window_rejects_empty_range():
    with pytest.raises(ValueError):
        AnalysisWindow(start_utc=10, end_utc=10)
