"""Keyword-presence features, linear SVM models and cross-validated alpha sweeps."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from senticorr.corpus import Corpus, Sentence
from senticorr.errors import (
    DimensionMismatch,
    EmptyKeywordSet,
    InsufficientSamplesPerClass,
    SingleClassTrainingSet,
)
from senticorr.features import KeywordTable, select_keywords, word_stats_from_sentences
from senticorr.svm import smo_solve

DEFAULT_ALPHA_GRID = tuple(1.0 + 0.25 * i for i in range(12))
DEFAULT_C_GRID = (0.5, 1.0, 1.5, 2.0, 2.5, 3.0)
DEFAULT_TOL = 1e-3


def _keyword_list(keywords, mode: str = "combined") -> list[str]:
    if isinstance(keywords, KeywordTable):
        return keywords.keywords(mode)
    return list(keywords)


def vectorize(sentence: Sentence | Sequence[str], keywords, mode: str = "combined") -> np.ndarray:
    """Binary presence vector over the sorted keyword list.

    ``keywords`` is either a :class:`KeywordTable` (its ``mode`` list is used)
    or an already ordered sequence of words.
    """
    words = _keyword_list(keywords, mode)
    tokens = set(sentence.tokens if isinstance(sentence, Sentence) else sentence)
    return np.fromiter((w in tokens for w in words), dtype=float, count=len(words))


@dataclass(frozen=True)
class TrainedModel:
    weights: np.ndarray
    bias: float
    c_param: float
    keywords: tuple[str, ...]
    keyword_table: KeywordTable | None = field(default=None, compare=False)
    converged: bool = True

    def decision_function(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.shape[-1] != len(self.weights):
            raise DimensionMismatch(
                f"feature dimension {X.shape[-1]} != model dimension {len(self.weights)}"
            )
        return X @ self.weights + self.bias

    def predict_sentences(self, sentences: Iterable[Sentence]) -> np.ndarray:
        sentences = list(sentences)
        if not sentences:
            return np.zeros(0, dtype=int)
        X = np.stack([vectorize(s, self.keywords) for s in sentences])
        return np.where(self.decision_function(X) > 0, 1, -1)

    def to_json(self) -> dict:
        return {
            "c": self.c_param,
            "bias": self.bias,
            "keywords": list(self.keywords),
            "weights": [float(w) for w in self.weights],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "TrainedModel":
        try:
            keywords = tuple(data["keywords"])
            weights = np.asarray(data["weights"], dtype=float)
            c = float(data["c"])
            bias = float(data["bias"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"invalid model file: {exc}") from None
        if weights.shape != (len(keywords),):
            raise ValueError("model weights and keywords are not index-aligned")
        if list(keywords) != sorted(keywords):
            raise ValueError("model keywords must be sorted")
        return cls(weights, bias, c, keywords)

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), ensure_ascii=False, indent=2) + "\n",
                              encoding="utf-8")

    @classmethod
    def load(cls, path) -> "TrainedModel":
        return cls.from_json(json.loads(Path(path).read_text(encoding="utf-8")))


def train_svm(samples, c_param: float, keywords: Sequence[str] | None = None,
              tol: float = DEFAULT_TOL, max_iter: int = 1_000_000,
              keyword_table: KeywordTable | None = None) -> TrainedModel:
    """Fit a soft-margin linear SVM on ``(feature_vector, label)`` pairs."""
    samples = list(samples)
    if not samples:
        raise SingleClassTrainingSet("no training samples")
    X = np.stack([np.asarray(x, dtype=float) for x, _ in samples])
    y = np.array([float(lab) for _, lab in samples])
    return _fit(X, y, c_param, keywords, tol, max_iter, keyword_table)


def _fit(X, y, c_param, keywords, tol=DEFAULT_TOL, max_iter=1_000_000, keyword_table=None):
    res = smo_solve(X, y, c_param, tol=tol, max_iter=max_iter)
    if keywords is None:
        keywords = tuple(f"f{i}" for i in range(X.shape[1]))
    return TrainedModel(res.weights, res.bias, float(c_param), tuple(keywords),
                        keyword_table, res.converged)


def predict(model: TrainedModel, x) -> int:
    """Label of one feature vector; a zero decision value maps to -1."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != len(model.weights):
        raise DimensionMismatch(f"feature dimension {x.shape} != model dimension {len(model.weights)}")
    return 1 if float(x @ model.weights) + model.bias > 0 else -1


def f1_score(predictions, gold_labels, positive_class: int = 1) -> tuple[float, float, float]:
    """Precision, recall and F1 for ``positive_class``; 0/0 ratios are 0."""
    pred = np.asarray(predictions)
    gold = np.asarray(gold_labels)
    if pred.shape != gold.shape or pred.size == 0:
        raise ValueError("predictions and gold labels must be equal-length and non-empty")
    tp = int(np.sum((pred == positive_class) & (gold == positive_class)))
    fp = int(np.sum((pred == positive_class) & (gold != positive_class)))
    fn = int(np.sum((pred != positive_class) & (gold == positive_class)))
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


def macro_f1(predictions, gold_labels) -> float:
    return (f1_score(predictions, gold_labels, 1)[2] + f1_score(predictions, gold_labels, -1)[2]) / 2


# --- cross-validation -------------------------------------------------------

class LabeledData:
    """Labeled sentences with a precomputed token-presence matrix.

    Keyword feature matrices are column selections of the presence matrix,
    which keeps the alpha/C sweep from re-tokenizing for every grid cell.
    """

    def __init__(self, sentences: Iterable[Sentence]):
        self.sentences = [s for s in sentences if s.gold_label is not None]
        if not self.sentences:
            raise SingleClassTrainingSet("no labeled sentences")
        self.y = np.array([s.label_sign for s in self.sentences], dtype=float)
        vocab = sorted({t for s in self.sentences for t in s.tokens})
        self.index = {w: i for i, w in enumerate(vocab)}
        self.presence = np.zeros((len(self.sentences), len(vocab)), dtype=float)
        for row, s in enumerate(self.sentences):
            self.presence[row, [self.index[t] for t in set(s.tokens)]] = 1.0

    @classmethod
    def coerce(cls, data) -> "LabeledData":
        if isinstance(data, LabeledData):
            return data
        if isinstance(data, Corpus):
            return cls(data.labeled_sentences())
        return cls(data)

    def __len__(self):
        return len(self.sentences)

    def matrix(self, keywords: Sequence[str]) -> np.ndarray:
        cols = [self.index.get(w, -1) for w in keywords]
        X = np.zeros((len(self.sentences), len(cols)))
        for k, c in enumerate(cols):
            if c >= 0:
                X[:, k] = self.presence[:, c]
        return X


def stratified_folds(labels, k: int, seed: int) -> np.ndarray:
    """Fold index per sample from a seeded shuffle, stratified by class.

    Shuffled positives then shuffled negatives are dealt round-robin, so fold
    sizes differ by at most one overall and per-class counts by at most one.
    """
    labels = np.asarray(labels)
    if k < 2:
        raise ValueError("k must be at least 2")
    for cls_ in (1, -1):
        if np.sum(labels == cls_) < k:
            raise InsufficientSamplesPerClass(
                f"class {cls_:+d} has {int(np.sum(labels == cls_))} samples, need at least {k}"
            )
    rng = np.random.default_rng(seed)
    order = np.concatenate([rng.permutation(np.flatnonzero(labels == c)) for c in (1, -1)])
    folds = np.empty(len(labels), dtype=int)
    folds[order] = np.arange(len(order)) % k
    return folds


@dataclass(frozen=True)
class CvReport:
    k: int
    per_fold_f1: tuple[float, ...]
    alpha: float
    alpha_prime: float
    c_param: float
    mode: str = "combined"
    per_fold_macro_f1: tuple[float, ...] = ()
    n_features: int = 0

    @property
    def f1_mean(self) -> float:
        return float(np.mean(self.per_fold_f1))

    @property
    def f1_std(self) -> float:
        # population std over folds
        return float(np.std(self.per_fold_f1))

    @property
    def macro_f1_mean(self) -> float:
        return float(np.mean(self.per_fold_macro_f1)) if self.per_fold_macro_f1 else math.nan

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "alpha": self.alpha,
            "alpha_prime": self.alpha_prime,
            "c": self.c_param,
            "k": self.k,
            "n_features": self.n_features,
            "f1_mean": self.f1_mean,
            "f1_std": self.f1_std,
            "per_fold_f1": list(self.per_fold_f1),
            "macro_f1_mean": self.macro_f1_mean,
        }


def _cv_on_matrix(X, y, folds, k, c_param, tol):
    f1s, macros = [], []
    for fold in range(k):
        test = folds == fold
        train = ~test
        model = _fit(X[train], y[train], c_param, None, tol)
        pred = np.where(X[test] @ model.weights + model.bias > 0, 1, -1)
        f1s.append(f1_score(pred, y[test])[2])
        macros.append(macro_f1(pred, y[test]))
    return tuple(f1s), tuple(macros)


def kfold_cv(data, table: KeywordTable | Sequence[str], c_param: float, k: int = 5,
             seed: int = 0, mode: str = "combined", tol: float = DEFAULT_TOL) -> CvReport:
    """Stratified k-fold cross-validation of the SVM on keyword features.

    ``data`` may be a :class:`Corpus`, a sequence of labeled sentences or a
    :class:`LabeledData`.  The keyword table is taken as given; it is not
    re-derived per fold.
    """
    data = LabeledData.coerce(data)
    keywords = _keyword_list(table, mode)
    if not keywords:
        raise EmptyKeywordSet(f"no {mode} keywords")
    folds = stratified_folds(data.y, k, seed)
    X = data.matrix(keywords)
    f1s, macros = _cv_on_matrix(X, data.y, folds, k, c_param, tol)
    alpha = table.alpha if isinstance(table, KeywordTable) else math.nan
    alpha_prime = table.alpha_prime if isinstance(table, KeywordTable) else math.nan
    return CvReport(k, f1s, alpha, alpha_prime, float(c_param), mode, macros, len(keywords))


# --- alpha sweep ------------------------------------------------------------

@dataclass
class SweepResult:
    best: dict[str, tuple[KeywordTable, CvReport]]
    grid: list[CvReport]

    @property
    def combined_table(self) -> KeywordTable:
        return self.best["combined"][0]


def _rank_key(report: CvReport, alpha: float):
    return (-report.f1_mean, alpha, report.c_param)


def sweep_alpha(data, alpha_grid: Sequence[float] = DEFAULT_ALPHA_GRID,
                c_grid: Sequence[float] = DEFAULT_C_GRID, k: int = 5, seed: int = 0,
                tol: float = DEFAULT_TOL) -> SweepResult:
    """Grid-search alpha (positive list), alpha' (negative list), then C for their union.

    The positive and negative lists are tuned independently over
    ``alpha_grid`` x ``c_grid``; the combined list is the union of the two
    winners and only C is re-tuned for it.  Ties go to the smaller alpha,
    then the smaller C.  Empty keyword lists score F1 = 0 on every fold.
    """
    if not alpha_grid or not c_grid:
        raise ValueError("alpha and C grids must be non-empty")
    data = LabeledData.coerce(data)
    stats = word_stats_from_sentences(data.sentences)
    folds = stratified_folds(data.y, k, seed)
    cache: dict[tuple, tuple] = {}
    grid: list[CvReport] = []

    def evaluate(keywords, c):
        key = (tuple(keywords), float(c))
        if key not in cache:
            if keywords:
                cache[key] = _cv_on_matrix(data.matrix(keywords), data.y, folds, k, c, tol)
            else:
                cache[key] = ((0.0,) * k, (0.0,) * k)
        return cache[key]

    best: dict[str, tuple[KeywordTable, CvReport]] = {}
    for mode in ("positive", "negative"):
        winner = None
        for a in sorted(alpha_grid):
            table = select_keywords(stats, a, a)
            keywords = table.keywords(mode)
            for c in sorted(c_grid):
                f1s, macros = evaluate(keywords, c)
                report = CvReport(k, f1s, a, a, float(c), mode, macros, len(keywords))
                grid.append(report)
                if winner is None or _rank_key(report, a) < _rank_key(winner[1], winner[1].alpha):
                    winner = (table, report)
        best[mode] = winner

    a_pos = best["positive"][1].alpha
    a_neg = best["negative"][1].alpha
    table = select_keywords(stats, a_pos, a_neg)
    keywords = table.keywords("combined")
    winner = None
    for c in sorted(c_grid):
        f1s, macros = evaluate(keywords, c)
        report = CvReport(k, f1s, a_pos, a_neg, float(c), "combined", macros, len(keywords))
        grid.append(report)
        if winner is None or _rank_key(report, 0.0) < _rank_key(winner[1], 0.0):
            winner = (table, report)
    best["combined"] = winner
    return SweepResult(best, grid)


def select_c(data, table: KeywordTable, c_grid: Sequence[float] = DEFAULT_C_GRID, k: int = 5,
             seed: int = 0, mode: str = "combined", tol: float = DEFAULT_TOL) -> CvReport:
    """Best CV report over ``c_grid`` for a fixed keyword list (ties: smaller C)."""
    data = LabeledData.coerce(data)
    reports = [kfold_cv(data, table, c, k, seed, mode, tol) for c in sorted(c_grid)]
    return min(reports, key=lambda r: (-r.f1_mean, r.c_param))


def train_model(data, table: KeywordTable, c_param: float, mode: str = "combined",
                tol: float = DEFAULT_TOL) -> TrainedModel:
    """Train on all labeled sentences with the table's ``mode`` keyword list."""
    data = LabeledData.coerce(data)
    keywords = table.keywords(mode)
    if not keywords:
        raise EmptyKeywordSet("empty feature space")
    return _fit(data.matrix(keywords), data.y, c_param, keywords, tol, keyword_table=table)
