import csv

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from senticorr.classifier import TrainedModel
from senticorr.corpus import Review, Sentence
from senticorr.errors import EmptyReview
from senticorr.sentiment import (
    CSV_FIELDS,
    paired_samples,
    summarize_corpus,
    summarize_review,
    write_summaries_csv,
)

# decision value is +1 for any sentence containing "好" and -1 otherwise
MODEL = TrainedModel(np.array([2.0]), -1.0, 1.0, ("好",))


def review(rid, *sentences, score=4.0):
    return Review(rid, "h1", score, tuple(Sentence(tuple(s), None) for s in sentences))


def test_summarize_example():
    s = summarize_review(review("r1", "好", "好", "贵", "好"), MODEL)
    assert (s.n_total, s.n_pos, s.n_neg) == (4, 3, 1)
    assert s.pos_ratio == 0.75 and s.neg_ratio == 0.25


def test_single_sentence_review():
    s = summarize_review(review("r1", "贵"), MODEL)
    assert (s.pos_ratio, s.neg_ratio) == (0.0, 1.0)


def test_empty_review():
    with pytest.raises(EmptyReview):
        summarize_review(Review("r9", "h", 3.0, ()), MODEL)


def test_corpus_order_and_pairs():
    reviews = [review("b", "好", score=5.0), review("a", "贵", "好", score=2.0)]
    summaries = summarize_corpus(reviews, MODEL)
    assert [s.review_id for s in summaries] == ["b", "a"]
    (pos, sc), (neg, sc2) = paired_samples(summaries)
    np.testing.assert_array_equal(pos, [1.0, 0.5])
    np.testing.assert_array_equal(neg, [0.0, 0.5])
    np.testing.assert_array_equal(sc, [5.0, 2.0])
    with pytest.raises(ValueError):
        summarize_corpus([], MODEL)


@given(st.lists(st.lists(st.sampled_from(["好", "贵"]), min_size=1, max_size=10), min_size=1, max_size=8))
def test_ratio_invariants(reviews):
    summaries = summarize_corpus(
        [review(f"r{i}", *[[t] for t in sents]) for i, sents in enumerate(reviews)], MODEL
    )
    assert sum(s.n_total for s in summaries) == sum(len(r) for r in reviews)
    for s in summaries:
        assert s.n_pos + s.n_neg == s.n_total
        assert 0.0 <= s.pos_ratio <= 1.0
        assert s.pos_ratio + s.neg_ratio == pytest.approx(1.0)
        assert (s.pos_ratio * s.n_total) == pytest.approx(round(s.pos_ratio * s.n_total))


def test_csv_layout(tmp_path):
    summaries = summarize_corpus([review("r1", "好", "贵", "贵", score=3.5)], MODEL)
    path = tmp_path / "s.csv"
    write_summaries_csv(summaries, path)
    rows = list(csv.reader(path.open(encoding="utf-8")))
    assert tuple(rows[0]) == CSV_FIELDS
    assert rows[1] == ["r1", "h1", "3.5", "3", "1", "2", "0.333333", "0.666667"]
