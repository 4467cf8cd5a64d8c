"""Entropy-based keyword extraction.

Each labeled sentence is one document.  For every word we tally how often it
occurs in each positive and each negative document, turn the per-class tallies
into a distribution over documents and take its Shannon entropy in bits.  A
word spread over many positive sentences but few negative ones has a high
positive entropy and a low negative one, which is what the selection rule
looks for.
"""

from __future__ import annotations

import json
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from senticorr.corpus import NEGATIVE, POSITIVE
from senticorr.errors import EmptyTrainingSet, ZeroTotalCount

LIST_MODES = ("positive", "negative", "combined")


@dataclass(frozen=True)
class WordStats:
    word: str
    count_pos_per_doc: Mapping[int, int]
    count_neg_per_doc: Mapping[int, int]
    entropy_pos: float
    entropy_neg: float


@dataclass(frozen=True)
class KeywordTable:
    alpha: float
    alpha_prime: float
    positive_keywords: frozenset[str]
    negative_keywords: frozenset[str]
    combined: frozenset[str] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "combined", self.positive_keywords | self.negative_keywords)

    def keywords(self, mode: str = "combined") -> list[str]:
        """Sorted keyword list for one of ``positive``, ``negative``, ``combined``."""
        if mode == "positive":
            words = self.positive_keywords
        elif mode == "negative":
            words = self.negative_keywords
        elif mode == "combined":
            words = self.combined
        else:
            raise ValueError(f"unknown list mode {mode!r}")
        return sorted(words)

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha,
            "alpha_prime": self.alpha_prime,
            "positive": sorted(self.positive_keywords),
            "negative": sorted(self.negative_keywords),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "KeywordTable":
        try:
            return cls(
                float(data["alpha"]),
                float(data["alpha_prime"]),
                frozenset(data["positive"]),
                frozenset(data["negative"]),
            )
        except (KeyError, TypeError) as exc:
            raise ValueError(f"invalid keyword table: {exc}") from None

    def save(self, path) -> None:
        Path(path).write_text(
            json.dumps(self.to_json(), ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
        )

    @classmethod
    def load(cls, path) -> "KeywordTable":
        return cls.from_json(json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass
class OccurrenceCounts:
    """Per-word token tallies, keyed by document index within its class."""

    pos: dict[str, dict[int, int]]
    neg: dict[str, dict[int, int]]
    n_pos_docs: int
    n_neg_docs: int

    @property
    def vocabulary(self) -> list[str]:
        return sorted(set(self.pos) | set(self.neg))


def count_occurrences(labeled_sentences: Iterable[tuple[Sequence[str], str]]) -> OccurrenceCounts:
    """Tally word occurrences per (word, document, class).

    ``labeled_sentences`` yields ``(tokens, label)`` with label ``"pos"`` or
    ``"neg"``.  Documents are numbered separately within each class.
    """
    pos: dict[str, dict[int, int]] = defaultdict(dict)
    neg: dict[str, dict[int, int]] = defaultdict(dict)
    n_docs = {POSITIVE: 0, NEGATIVE: 0}
    for tokens, label in labeled_sentences:
        if label not in n_docs:
            raise ValueError(f"sentence without a usable label: {label!r}")
        target = pos if label == POSITIVE else neg
        doc = n_docs[label]
        n_docs[label] += 1
        for word, n in Counter(tokens).items():
            target[word][doc] = n
    if n_docs[POSITIVE] + n_docs[NEGATIVE] == 0:
        raise EmptyTrainingSet("no labeled sentences")
    return OccurrenceCounts(dict(pos), dict(neg), n_docs[POSITIVE], n_docs[NEGATIVE])


def word_distribution(counts: Mapping[int, int]) -> dict[int, float]:
    """Normalize one word's per-document counts into probabilities."""
    total = sum(counts.values())
    if total <= 0:
        raise ZeroTotalCount("word has no occurrences in this class")
    return {doc: n / total for doc, n in counts.items() if n > 0}


def word_entropy(probabilities: Iterable[float]) -> float:
    """Shannon entropy in bits, with 0 log 0 taken as 0."""
    h = 0.0
    for p in probabilities:
        if p > 0.0:
            h -= p * math.log2(p)
    # rounding can leave -0.0 or a tiny negative for single-support inputs
    return max(h, 0.0)


def _class_entropy(counts: Mapping[int, int] | None) -> float:
    if not counts:
        return 0.0
    return word_entropy(word_distribution(counts).values())


def compute_word_stats(counts: OccurrenceCounts) -> dict[str, WordStats]:
    stats = {}
    for word in counts.vocabulary:
        cp = counts.pos.get(word, {})
        cn = counts.neg.get(word, {})
        stats[word] = WordStats(word, cp, cn, _class_entropy(cp), _class_entropy(cn))
    return stats


def select_keywords(word_stats: Mapping[str, WordStats] | Iterable[WordStats],
                    alpha: float, alpha_prime: float) -> KeywordTable:
    """Apply the strict entropy-ratio rule to every word.

    A word is a positive keyword when ``H_pos > alpha * H_neg`` and a negative
    keyword when ``H_neg > alpha_prime * H_pos``.  Either set may come out
    empty; callers check with :meth:`KeywordTable.keywords`.
    """
    values = word_stats.values() if isinstance(word_stats, Mapping) else word_stats
    positive, negative = set(), set()
    for ws in values:
        if ws.entropy_pos > alpha * ws.entropy_neg:
            positive.add(ws.word)
        if ws.entropy_neg > alpha_prime * ws.entropy_pos:
            negative.add(ws.word)
    return KeywordTable(alpha, alpha_prime, frozenset(positive), frozenset(negative))


def word_stats_from_sentences(sentences) -> dict[str, WordStats]:
    """Convenience wrapper taking :class:`~senticorr.corpus.Sentence` objects."""
    return compute_word_stats(
        count_occurrences((s.tokens, s.gold_label) for s in sentences if s.gold_label is not None)
    )
