"""Per-review positive/negative sentence ratios."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from senticorr.classifier import TrainedModel
from senticorr.corpus import Corpus, Review
from senticorr.errors import EmptyReview

CSV_FIELDS = ("review_id", "hotel_id", "score", "n_total", "n_pos", "n_neg", "pos_ratio", "neg_ratio")


@dataclass(frozen=True)
class SentimentSummary:
    review_id: str
    hotel_id: str
    score: float | None
    n_total: int
    n_pos: int
    n_neg: int

    @property
    def pos_ratio(self) -> float:
        return self.n_pos / self.n_total

    @property
    def neg_ratio(self) -> float:
        return self.n_neg / self.n_total


def summarize_review(review: Review, model: TrainedModel) -> SentimentSummary:
    if not review.sentences:
        raise EmptyReview(review.review_id)
    labels = model.predict_sentences(review.sentences)
    n_pos = int(np.sum(labels == 1))
    n_total = len(labels)
    return SentimentSummary(review.review_id, review.hotel_id, review.score,
                            n_total, n_pos, n_total - n_pos)


def summarize_corpus(corpus: Corpus | Iterable[Review], model: TrainedModel) -> list[SentimentSummary]:
    """One summary per review, in input order."""
    reviews = list(corpus)
    if not reviews:
        raise ValueError("corpus is empty")
    return [summarize_review(r, model) for r in reviews]


def paired_samples(summaries: list[SentimentSummary]):
    """``(pos_ratio, score)`` and ``(neg_ratio, score)`` arrays for the stats module."""
    scores = np.array([s.score for s in summaries], dtype=float)
    pos = np.array([s.pos_ratio for s in summaries])
    neg = np.array([s.neg_ratio for s in summaries])
    return (pos, scores), (neg, scores)


def write_summaries_csv(summaries: list[SentimentSummary], path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_FIELDS)
        for s in summaries:
            writer.writerow([
                s.review_id, s.hotel_id, "" if s.score is None else repr(s.score),
                s.n_total, s.n_pos, s.n_neg, f"{s.pos_ratio:.6f}", f"{s.neg_ratio:.6f}",
            ])
