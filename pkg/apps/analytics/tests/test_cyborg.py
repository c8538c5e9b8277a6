from app.services.cyborg_service import (
    FAST_AGE_GROUPS,
    cyborg_report,
    fast_post_age_histograms,
    first_comment,
    first_comment_latency,
    is_cyborg_like,
    is_successful,
)
from conftest import corpus_of, make_comment, make_post

LONG = "x" * 150


def test_first_comment_latency():
    post = make_post("t3_p", 100)
    assert first_comment_latency(post, [make_comment("t1_a", "t3_p", 105)]) == 5
    assert first_comment_latency(post, []) is None


def test_first_comment_tie_goes_to_smaller_id():
    post = make_post("t3_p", 100)
    comments = [make_comment("t1_b", "t3_p", 106), make_comment("t1_a", "t3_p", 106)]
    assert first_comment_latency(post, comments) == 6
    assert first_comment(comments).name == "t1_a"


def test_cyborg_like_when_all_conditions_hold():
    post = make_post("t3_p", 100, author="op")
    verdict = is_cyborg_like(post, [make_comment("t1_a", "t3_p", 105, author="op", body=LONG)])
    assert verdict.is_cyborg_like
    assert verdict.chars == 150


def test_not_cyborg_like_for_other_author_or_slow_comment():
    post = make_post("t3_p", 100, author="op")
    other = is_cyborg_like(post, [make_comment("t1_a", "t3_p", 105, author="u9", body=LONG)])
    slow = is_cyborg_like(post, [make_comment("t1_a", "t3_p", 107, author="op", body=LONG)])
    assert not other.is_cyborg_like
    assert not slow.is_cyborg_like
    assert is_cyborg_like(post, [make_comment("t1_a", "t3_p", 106, author="op", body=LONG)]).is_cyborg_like


def test_length_and_link_rules():
    post = make_post("t3_p", 100, author="op")
    exactly_100 = is_cyborg_like(post, [make_comment("t1_a", "t3_p", 101, author="op", body="y" * 100)])
    linked = is_cyborg_like(
        post, [make_comment("t1_a", "t3_p", 101, author="op", body=LONG + " see www.example.com")]
    )
    assert not exactly_100.long_first_comment
    assert linked.contains_link and not linked.is_cyborg_like


def test_unicode_chars_are_scalars():
    post = make_post("t3_p", 100, author="op")
    verdict = is_cyborg_like(post, [make_comment("t1_a", "t3_p", 101, author="op", body="é" * 101)])
    assert verdict.chars == 101 and verdict.is_cyborg_like


def test_no_comments_is_not_cyborg_like():
    verdict = is_cyborg_like(make_post("t3_p", 100), [])
    assert verdict.first_comment_latency is None
    assert not verdict.is_cyborg_like


def test_is_successful():
    post = make_post("t3_p", 100, author="op", score=1)
    assert is_successful(post, [make_comment("t1_a", "t3_p", 110, author="u2")])
    assert not is_successful(post, [make_comment("t1_a", "t3_p", 110, author="op")])
    assert is_successful(make_post("t3_q", 100, author="op", score=5), [])


def _fast_post(idx, author, first_author, body, foreign=False, score=1):
    post = make_post(f"t3_{idx:04d}", 1000, author=author, score=score)
    comments = [make_comment(f"t1_{idx:04d}_0", post.name, 1003, author=first_author, body=body)]
    if foreign:
        comments.append(make_comment(f"t1_{idx:04d}_1", post.name, 1100, author="stranger"))
    return post, comments


def test_cyborg_report_on_planted_posts():
    posts, comments = [], []
    for i in range(100):
        p, c = _fast_post(i, f"a{i}", f"a{i}", LONG, foreign=i < 40)
        posts.append(p)
        comments += c
    for i in range(100, 150):
        p, c = _fast_post(i, f"a{i}", f"a{i}", "short", foreign=i % 2 == 0)
        posts.append(p)
        comments += c
    for i in range(150, 160):
        p, c = _fast_post(i, f"a{i}", "AutoModerator", LONG)
        posts.append(p)
        comments += c
    slow = make_post("t3_slow", 1000, author="z")
    posts.append(slow)
    comments.append(make_comment("t1_slow", slow.name, 2000, author="z", body=LONG))

    report, verdicts = cyborg_report(corpus_of(posts, comments))
    assert report.posts_first_comment_within_6s == 160
    assert report.posts_same_author_first_comment == 150
    assert report.cyborg_like_posts == 100
    assert report.successful_cyborg == 40
    assert report.unsuccessful_cyborg == 60
    assert report.successful_non_cyborg == 25
    assert report.unsuccessful_non_cyborg == 25
    assert report.successful_other_author == 10
    assert report.automoderator_first_comments == 10
    assert report.successful_cyborg + report.unsuccessful_cyborg == report.cyborg_like_posts
    assert report.cyborg_success_rate == 0.4
    assert len(verdicts) == 160
    assert "t3_slow" not in {v.post_id for v in verdicts}


def test_cyborg_report_without_fast_posts():
    post = make_post("t3_p", 100)
    report, verdicts = cyborg_report(corpus_of([post], [make_comment("t1_a", "t3_p", 1000)]))
    assert verdicts == []
    assert all(v == 0 for k, v in report.model_dump().items() if not k.endswith("_rate"))


def test_report_merges_across_shards():
    posts_a, comments_a = _fast_post(1, "op", "op", LONG)
    posts_b, comments_b = _fast_post(2, "op", "u2", "hi")
    left, _ = cyborg_report(corpus_of([posts_a], comments_a))
    right, _ = cyborg_report(corpus_of([posts_b], comments_b))
    both, _ = cyborg_report(corpus_of([posts_a, posts_b], comments_a + comments_b))
    assert left + right == both


def test_verdict_carries_post_age():
    post, comments = _fast_post(1, "op", "op", LONG, foreign=True)
    verdict = is_cyborg_like(post, comments)
    assert verdict.post_age == 100
    assert verdict.csv_row()[-1] == 100
    assert is_cyborg_like(post, []).post_age is None


def test_fast_post_age_histograms_split_by_cyborg_and_success():
    posts, comments = [], []
    for i in range(10):
        # cyborg-like, every other one with a foreign reply
        p, c = _fast_post(i, f"a{i}", f"a{i}", LONG, foreign=i % 2 == 0)
        posts.append(p)
        comments += c
    for i in range(10, 13):
        p, c = _fast_post(i, f"a{i}", f"a{i}", "short")
        posts.append(p)
        comments += c
    _, verdicts = cyborg_report(corpus_of(posts, comments))
    hists = fast_post_age_histograms(verdicts)

    assert set(hists) == set(FAST_AGE_GROUPS)
    totals = {group: hist.total for group, hist in hists.items()}
    assert totals == {
        "cyborg": 10,
        "cyborg_successful": 5,
        "cyborg_unsuccessful": 5,
        "non_cyborg": 3,
        "non_cyborg_successful": 0,
        "non_cyborg_unsuccessful": 3,
    }
    successful = hists["cyborg_successful"].rows()
    assert [r.count for r in successful if r.count] == [5]
    assert successful[0].bin_lo <= 100 < successful[0].bin_hi
    unsuccessful = [r for r in hists["non_cyborg_unsuccessful"].rows() if r.count]
    assert len(unsuccessful) == 1 and unsuccessful[0].bin_lo <= 3 < unsuccessful[0].bin_hi
    assert hists["non_cyborg_successful"].rows() == []
