"""Seeded synthetic review corpora with planted sentiment vocabularies.

Each review draws a latent positive share ``t``; every sentence is positive
with probability ``t`` and mixes sentiment words from its own class with
neutral filler.  A small fraction of sentences leak a word from the opposite
class, and some carry no sentiment word at all, so the classification problem
is not trivially separable.  Scores depend on the review's realized positive
sentence ratio according to ``dependence``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from senticorr.corpus import NEGATIVE, POSITIVE, Review, Sentence
from senticorr.errors import ConstantInput
from senticorr.stats.correlation import kendall, spearman

DEPENDENCE_NOISE = {"strong": 0.3, "weak": 4.0}
SCORE_LEVELS = np.arange(1.0, 5.01, 0.5)


@dataclass(frozen=True)
class VocabSpec:
    n_positive: int = 30
    n_negative: int = 30
    n_neutral: int = 200

    def words(self):
        pos = [f"pos{i:03d}" for i in range(self.n_positive)]
        neg = [f"neg{i:03d}" for i in range(self.n_negative)]
        neutral = [f"w{i:04d}" for i in range(self.n_neutral)]
        return pos, neg, neutral


@dataclass(frozen=True)
class SynthSpec:
    n_reviews: int = 400
    min_sentences: int = 5
    max_sentences: int = 5
    vocab: VocabSpec = VocabSpec()
    leak_rate: float = 0.08
    hard_rate: float = 0.03
    dependence: str = "strong"
    n_hotels: int = 50

    def __post_init__(self):
        if self.n_reviews < 1:
            raise ValueError("n_reviews must be >= 1")
        if not 1 <= self.min_sentences <= self.max_sentences:
            raise ValueError("need 1 <= min_sentences <= max_sentences")
        if self.dependence not in ("none", "weak", "strong"):
            raise ValueError(f"unknown dependence {self.dependence!r}")


def _sentence(rng, own, other, neutral, spec: SynthSpec) -> list[str]:
    tokens = list(rng.choice(neutral, size=int(rng.integers(2, 7))))
    if rng.random() >= spec.hard_rate:
        tokens += list(rng.choice(own, size=int(rng.integers(1, 3))))
    if rng.random() < spec.leak_rate:
        tokens.append(str(rng.choice(other)))
    rng.shuffle(tokens)
    return [str(t) for t in tokens]


def _score(rng, ratio: float, dependence: str) -> float:
    if dependence == "none":
        return float(rng.choice(SCORE_LEVELS))
    latent = 1.0 + 4.0 * ratio + rng.normal(0.0, DEPENDENCE_NOISE[dependence])
    return float(np.clip(np.round(latent * 2) / 2, 1.0, 5.0))


def generate(spec: SynthSpec, seed: int) -> list[Review]:
    rng = np.random.default_rng(seed)
    pos, neg, neutral = spec.vocab.words()
    reviews = []
    for r in range(spec.n_reviews):
        share = rng.random()
        n_sent = int(rng.integers(spec.min_sentences, spec.max_sentences + 1))
        sentences = []
        for _ in range(n_sent):
            if rng.random() < share:
                sentences.append(Sentence(tuple(_sentence(rng, pos, neg, neutral, spec)), POSITIVE))
            else:
                sentences.append(Sentence(tuple(_sentence(rng, neg, pos, neutral, spec)), NEGATIVE))
        ratio = sum(s.gold_label == POSITIVE for s in sentences) / n_sent
        hotel = f"h{int(rng.integers(spec.n_hotels)):03d}"
        reviews.append(Review(f"r{r:06d}", hotel, _score(rng, ratio, spec.dependence), tuple(sentences)))
    return reviews


def gold_ratios(reviews) -> np.ndarray:
    return np.array([
        sum(s.gold_label == POSITIVE for s in r.sentences) / len(r.sentences) for r in reviews
    ])


def generator_oracle(reviews) -> dict:
    """Rank correlations between gold positive ratios and scores."""
    x = gold_ratios(reviews)
    y = np.array([r.score for r in reviews], dtype=float)
    out = {"n_reviews": len(reviews), "n_sentences": int(sum(len(r.sentences) for r in reviews))}
    try:
        out["spearman_rho"] = spearman(x, y)
        out["kendall_tau"] = kendall(x, y)
    except ConstantInput:
        out["spearman_rho"] = None
        out["kendall_tau"] = None
    return out


def spec_to_json(spec: SynthSpec) -> dict:
    return asdict(spec)
