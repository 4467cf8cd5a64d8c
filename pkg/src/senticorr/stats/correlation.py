"""Pearson, Spearman and Kendall correlation over paired samples."""

from __future__ import annotations

import math

import numpy as np

from senticorr.errors import ConstantInput


def _paired(x, y):
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.shape != y.shape:
        raise ValueError(f"x and y differ in length ({x.size} vs {y.size})")
    if x.size < 2:
        raise ValueError("need at least two paired observations")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("inputs must be finite")
    return x, y


def pearson(x, y) -> float:
    """Sample Pearson correlation; raises :class:`ConstantInput` on zero variance."""
    x, y = _paired(x, y)
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise ConstantInput("pearson correlation is undefined for a constant variable")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return min(1.0, max(-1.0, r))


def rank(v) -> np.ndarray:
    """Ascending 1-based ranks, ties sharing the average of their block."""
    v = np.asarray(v, dtype=float).ravel()
    n = v.size
    order = np.argsort(v, kind="mergesort")
    sv = v[order]
    ranks = np.empty(n)
    # block boundaries between distinct sorted values
    starts = np.flatnonzero(np.r_[True, sv[1:] != sv[:-1]])
    ends = np.r_[starts[1:], n]
    avg = (starts + ends + 1) / 2.0
    ranks[order] = np.repeat(avg, ends - starts)
    return ranks


def spearman(x, y) -> float:
    """Pearson correlation of the fractional ranks."""
    x, y = _paired(x, y)
    try:
        return pearson(rank(x), rank(y))
    except ConstantInput:
        raise ConstantInput("spearman correlation is undefined for a constant variable") from None


def _count_inversions(seq: np.ndarray) -> int:
    """Number of pairs i < j with seq[i] > seq[j] (strict), by merge sort."""
    a = seq.tolist()
    n = len(a)
    buf = [0] * n
    inv = 0
    width = 1
    while width < n:
        for lo in range(0, n, 2 * width):
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i, j, k = lo, mid, lo
            while i < mid and j < hi:
                if a[j] < a[i]:
                    buf[k] = a[j]
                    inv += mid - i
                    j += 1
                else:
                    buf[k] = a[i]
                    i += 1
                k += 1
            buf[k:hi] = a[i:mid] + a[j:hi]
            a[lo:hi] = buf[lo:hi]
        width *= 2
    return inv


def _tie_pairs(v: np.ndarray) -> int:
    _, counts = np.unique(v, return_counts=True)
    return int(np.sum(counts * (counts - 1) // 2))


def concordance_counts(x, y) -> tuple[int, int, int, int]:
    """(concordant, discordant, pairs tied in x, pairs tied in y).

    Pairs tied in x or y are neither concordant nor discordant.
    """
    x, y = _paired(x, y)
    n = x.size
    order = np.lexsort((y, x))
    discordant = _count_inversions(y[order])
    tied_x = _tie_pairs(x)
    tied_y = _tie_pairs(y)
    tied_xy = _tie_pairs(x + 1j * y) if n else 0
    total = n * (n - 1) // 2
    concordant = total - tied_x - tied_y + tied_xy - discordant
    return concordant, discordant, tied_x, tied_y


def kendall(x, y, variant: str = "a") -> float:
    """Kendall's tau.

    ``variant="a"`` divides (concordant - discordant) by n(n-1)/2, so ties
    pull the value toward zero.  ``variant="b"`` applies the usual tie
    correction ``sqrt((n0 - t_x)(n0 - t_y))`` and raises
    :class:`ConstantInput` when either variable is constant.
    """
    concordant, discordant, tied_x, tied_y = concordance_counts(x, y)
    n = np.asarray(x).size
    n0 = n * (n - 1) // 2
    if variant == "a":
        return (concordant - discordant) / n0
    if variant == "b":
        denom = math.sqrt((n0 - tied_x) * (n0 - tied_y))
        if denom == 0:
            raise ConstantInput("kendall tau-b is undefined for a constant variable")
        return (concordant - discordant) / denom
    raise ValueError(f"unknown kendall variant {variant!r}")
