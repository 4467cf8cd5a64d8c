"""Review corpus loading, validation and serialization.

Corpora are JSON Lines files, one review per line::

    {"review_id": "r1", "hotel_id": "h9", "score": 4.5,
     "sentences": [["很", "好"], ["太", "贵"]],
     "labels": ["pos", "neg"]}

``labels`` is optional and only present for training corpora.  A ``null``
score is accepted on load and marks the review as unscored; downstream
commands that need scores reject such corpora.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from senticorr.errors import DuplicateReviewId, MalformedRecord

POSITIVE = "pos"
NEGATIVE = "neg"
LABELS = (POSITIVE, NEGATIVE)

SENTENCE_DELIMITERS = "。！？.!?"
_DELIM_RE = re.compile("[" + re.escape(SENTENCE_DELIMITERS) + "]")


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[str, ...]
    gold_label: str | None = None

    @property
    def label_sign(self) -> int:
        """+1 for a positive gold label, -1 for negative."""
        if self.gold_label is None:
            raise ValueError("sentence has no gold label")
        return 1 if self.gold_label == POSITIVE else -1


@dataclass(frozen=True)
class Review:
    review_id: str
    hotel_id: str
    score: float | None
    sentences: tuple[Sentence, ...]

    @property
    def is_labeled(self) -> bool:
        return any(s.gold_label is not None for s in self.sentences)


@dataclass(frozen=True)
class Corpus:
    reviews: tuple[Review, ...]
    provenance: str = field(default="", compare=False)

    def __len__(self) -> int:
        return len(self.reviews)

    def __iter__(self):
        return iter(self.reviews)

    @property
    def n_sentences(self) -> int:
        return sum(len(r.sentences) for r in self.reviews)

    def labeled_sentences(self) -> list[Sentence]:
        """All sentences carrying a gold label, in corpus order."""
        return [s for r in self.reviews for s in r.sentences if s.gold_label is not None]

    def first_unlabeled(self) -> Review | None:
        for review in self.reviews:
            if not review.is_labeled:
                return review
        return None

    def first_unscored(self) -> Review | None:
        for review in self.reviews:
            if review.score is None:
                return review
        return None


def split_sentences(raw_text: str) -> list[str]:
    """Split raw text on Chinese and ASCII sentence terminators.

    Delimiters are dropped, as are segments that are empty or whitespace only.

    >>> split_sentences("很好。太贵！")
    ['很好', '太贵']
    """
    return [seg.strip() for seg in _DELIM_RE.split(raw_text) if seg.strip()]


def _is_cjk(ch: str) -> bool:
    cp = ord(ch)
    return (
        0x4E00 <= cp <= 0x9FFF
        or 0x3400 <= cp <= 0x4DBF
        or 0xF900 <= cp <= 0xFAFF
        or 0x20000 <= cp <= 0x2FA1F
        or 0x3040 <= cp <= 0x30FF  # kana
        or 0xAC00 <= cp <= 0xD7AF  # hangul syllables
    )


def tokenize_fallback(sentence: str) -> list[str]:
    """Whitespace tokenizer that emits every CJK codepoint as its own token.

    Only used when raw text is ingested; a proper word segmenter should be
    run upstream whenever one is available.
    """
    tokens: list[str] = []
    run: list[str] = []
    for ch in sentence:
        if ch.isspace() or _is_cjk(ch):
            if run:
                tokens.append("".join(run))
                run = []
            if not ch.isspace():
                tokens.append(ch)
        else:
            run.append(ch)
    if run:
        tokens.append("".join(run))
    return tokens


def _check_tokens(tokens, lineno: int, idx: int) -> tuple[str, ...]:
    if not isinstance(tokens, list) or not tokens:
        raise MalformedRecord(lineno, f"sentence {idx} must be a non-empty list of tokens")
    for tok in tokens:
        if not isinstance(tok, str) or not tok:
            raise MalformedRecord(lineno, f"sentence {idx} contains an empty or non-string token")
        if _DELIM_RE.search(tok):
            raise MalformedRecord(lineno, f"sentence {idx} token {tok!r} contains a sentence delimiter")
    return tuple(tokens)


def _parse_record(record, lineno: int, tokenizer: str) -> Review:
    if not isinstance(record, dict):
        raise MalformedRecord(lineno, "record is not a JSON object")
    for key in ("review_id", "hotel_id", "score"):
        if key not in record:
            raise MalformedRecord(lineno, f"missing field {key!r}")
    review_id, hotel_id, score = record["review_id"], record["hotel_id"], record["score"]
    if not isinstance(review_id, str) or not review_id:
        raise MalformedRecord(lineno, "review_id must be a non-empty string")
    if not isinstance(hotel_id, str):
        raise MalformedRecord(lineno, "hotel_id must be a string")
    if score is not None:
        if isinstance(score, bool) or not isinstance(score, (int, float)) or not math.isfinite(score):
            raise MalformedRecord(lineno, "score must be a finite number or null")
        score = float(score)

    if "sentences" in record:
        raw_sentences = record["sentences"]
        if not isinstance(raw_sentences, list):
            raise MalformedRecord(lineno, "sentences must be a list")
        if tokenizer == "fallback":
            # raw sentence strings are accepted alongside token lists
            raw_sentences = [
                tokenize_fallback(s) if isinstance(s, str) else s for s in raw_sentences
            ]
    elif tokenizer == "fallback" and isinstance(record.get("text"), str):
        raw_sentences = [tokenize_fallback(s) for s in split_sentences(record["text"])]
    else:
        raise MalformedRecord(lineno, "missing field 'sentences'")
    if not raw_sentences:
        raise MalformedRecord(lineno, "review has no sentences")
    token_lists = [_check_tokens(t, lineno, i) for i, t in enumerate(raw_sentences)]

    labels = record.get("labels")
    if labels is None:
        labels = [None] * len(token_lists)
    elif not isinstance(labels, list) or len(labels) != len(token_lists):
        raise MalformedRecord(lineno, "labels must be a list with one entry per sentence")
    for lab in labels:
        if lab is not None and lab not in LABELS:
            raise MalformedRecord(lineno, f"unknown label {lab!r}")

    sentences = tuple(Sentence(t, lab) for t, lab in zip(token_lists, labels))
    return Review(review_id, hotel_id, score, sentences)


def parse_lines(lines: Iterable[str], provenance: str = "", tokenizer: str = "pretokenized") -> Corpus:
    reviews: list[Review] = []
    seen: dict[str, int] = {}
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedRecord(lineno, f"invalid JSON: {exc.msg}") from None
        review = _parse_record(record, lineno, tokenizer)
        if review.review_id in seen:
            raise DuplicateReviewId(review.review_id, lineno)
        seen[review.review_id] = lineno
        reviews.append(review)
    return Corpus(tuple(reviews), provenance)


def load_corpus(path, format: str = "jsonl", tokenizer: str = "pretokenized") -> Corpus:
    """Load and validate a corpus file.

    The whole file is rejected on the first malformed record.

    Raises
    ------
    FileNotFoundError
        If ``path`` does not exist.
    MalformedRecord
        On a record that fails the schema, with its 1-based line number.
    DuplicateReviewId
        If two records share a ``review_id``.
    """
    if format != "jsonl":
        raise ValueError(f"unsupported corpus format {format!r}")
    if tokenizer not in ("pretokenized", "fallback"):
        raise ValueError(f"unknown tokenizer {tokenizer!r}")
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        return parse_lines(fh, provenance=str(path), tokenizer=tokenizer)


def review_to_record(review: Review) -> dict:
    record = {
        "review_id": review.review_id,
        "hotel_id": review.hotel_id,
        "score": review.score,
        "sentences": [list(s.tokens) for s in review.sentences],
    }
    if review.is_labeled:
        record["labels"] = [s.gold_label for s in review.sentences]
    return record


def dump_corpus(reviews: Sequence[Review] | Corpus, path) -> None:
    """Write reviews as JSON Lines (UTF-8, CJK kept unescaped)."""
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        for review in reviews:
            fh.write(json.dumps(review_to_record(review), ensure_ascii=False) + "\n")
