import random
from collections import Counter

import pytest

from app.services.authors_service import (
    AuthorCategory,
    AuthorProfile,
    InteractionGraph,
    PerPostClass,
    author_categories,
    author_row,
    author_summary,
    build_interaction_graph,
    build_profiles,
    effective_comments_per_post,
    interaction_score,
)
from app.services.exceptions import NoPosts, UndefinedInteractionScore
from conftest import corpus_of, make_comment, make_post


def test_author_categories():
    corpus = corpus_of(
        [make_post("t3_a", author="u1"), make_post("t3_b", author="u3")],
        [make_comment("t1_1", "t3_a", 150, author="u2"), make_comment("t1_2", "t3_a", 160, author="u3")],
    )
    counts = author_categories(corpus)
    assert (counts.producers_only, counts.consumers_only, counts.both, counts.total_active) == (1, 1, 1, 3)


def test_deleted_commenters_are_not_consumers():
    corpus = corpus_of(
        [make_post("t3_a", author="u1")],
        [make_comment(f"t1_{i}", "t3_a", 150 + i, author="[deleted]") for i in range(4)],
    )
    counts = author_categories(corpus)
    assert counts.consumers_only == 0
    assert counts.total_active == 1


@pytest.mark.parametrize("a, b, expected", [(0, 5, 0.0), (5, 0, 1.0), (3, 3, 0.5)])
def test_interaction_score(a, b, expected):
    profile = AuthorProfile("u", n_effective_comments_received=a, n_comments_on_others=b)
    assert interaction_score(profile) == expected


def test_interaction_score_undefined():
    with pytest.raises(UndefinedInteractionScore):
        interaction_score(AuthorProfile("u", n_posts=2))


@pytest.mark.parametrize(
    "n_posts, received, expected",
    [
        (4, 2, (0.5, PerPostClass.LESS_THAN_ONE)),
        (3, 3, (1.0, PerPostClass.EXACTLY_ONE)),
        (2, 7, (3.5, PerPostClass.MORE_THAN_ONE)),
    ],
)
def test_effective_comments_per_post(n_posts, received, expected):
    profile = AuthorProfile("u", n_posts=n_posts, n_effective_comments_received=received)
    assert effective_comments_per_post(profile) == expected


def test_effective_comments_per_post_needs_posts():
    with pytest.raises(NoPosts):
        effective_comments_per_post(AuthorProfile("u", n_comments_made=3))


def test_graph_multiplicity_drops_self_comments():
    corpus = corpus_of(
        [make_post("t3_v", author="v")],
        [
            make_comment("t1_1", "t3_v", 110, author="u"),
            make_comment("t1_2", "t3_v", 120, parent_id="t1_1", author="u"),
            make_comment("t1_3", "t3_v", 130, author="v"),
        ],
    )
    graph = build_interaction_graph(corpus)
    assert graph.edges == Counter({("u", "v"): 2})
    assert graph.out_degree["u"] == 2 and graph.in_degree["v"] == 2
    assert graph.rows() == [("u", "v", 2)]


def test_graph_matches_pairwise_recount():
    rng = random.Random(3)
    authors = ["a", "b", "c", "d", "[deleted]"]
    posts = [make_post(f"t3_{i:02d}", author=rng.choice(authors)) for i in range(20)]
    comments = [
        make_comment(f"t1_{j:03d}", f"t3_{rng.randrange(20):02d}", 200 + j, author=rng.choice(authors))
        for j in range(300)
    ]
    corpus = corpus_of(posts, comments)
    graph = build_interaction_graph(corpus)

    naive = Counter()
    for c in comments:
        owner = next(p.author for p in posts if p.name == c.link_id)
        if "[deleted]" not in (c.author, owner) and c.author != owner:
            naive[(c.author, owner)] += 1
    assert graph.edges == naive
    assert sum(graph.in_degree.values()) == sum(graph.out_degree.values()) == graph.total_weight

    profiles = build_profiles(corpus, graph)
    for profile in profiles.values():
        assert profile.category in AuthorCategory
        try:
            assert 0.0 <= interaction_score(profile) <= 1.0
        except UndefinedInteractionScore:
            pass
    assert "[deleted]" not in profiles


def test_graph_merge_is_additive():
    left = InteractionGraph(Counter({("u", "v"): 1}))
    right = InteractionGraph(Counter({("u", "v"): 2, ("w", "v"): 1}))
    merged = left.merge(right)
    assert merged.edges == Counter({("u", "v"): 3, ("w", "v"): 1})
    assert merged.nodes == ["u", "v", "w"]


def test_author_rows_and_summary():
    corpus = corpus_of(
        [make_post("t3_a", author="p"), make_post("t3_b", author="p")],
        [make_comment("t1_1", "t3_a", 150, author="c"), make_comment("t1_2", "t3_b", 150, author="c")],
    )
    graph = build_interaction_graph(corpus)
    profiles = build_profiles(corpus, graph)
    assert author_row(profiles["p"]) == ("p", 2, 0, 2, 0, 1.0, "ProducerOnly", 1.0)
    assert author_row(profiles["c"]) == ("c", 0, 2, 0, 2, 0.0, "ConsumerOnly", None)
    summary, hist = author_summary(profiles, graph)
    assert summary.exactly_one_per_post == 1
    assert (summary.interaction_score_zero, summary.interaction_score_one) == (1, 1)
    assert hist.total == 2
