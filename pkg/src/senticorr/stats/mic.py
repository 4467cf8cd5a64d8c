"""Mutual information on grids and the maximal information coefficient.

``mic`` follows the usual approximation: one axis is equipartitioned into
``b`` rows (ties never split), the other axis is partitioned optimally for
that row assignment by dynamic programming over clumps of consecutive points,
and both orientations are tried for every grid size ``a * b <= B(n)``.
``mic_exact`` enumerates every pair of axis partitions and is only feasible
for tiny samples; it is the reference the approximation is checked against.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from senticorr.errors import DegenerateInput, InputTooLarge

DEFAULT_B_EXPONENT = 0.6
DEFAULT_CLUMP_FACTOR = 15
MIN_N = 4


@dataclass(frozen=True)
class Grid:
    a: int
    b: int
    x_cuts: tuple[float, ...]
    y_cuts: tuple[float, ...]
    cell_counts: np.ndarray  # shape (a, b)

    @property
    def mutual_information(self) -> float:
        return mutual_information(self.cell_counts / self.cell_counts.sum())


def mutual_information(joint) -> float:
    """Mutual information in bits of a joint probability table."""
    p = np.asarray(joint, dtype=float)
    px = p.sum(axis=1, keepdims=True)
    py = p.sum(axis=0, keepdims=True)
    nz = p > 0
    mi = float(np.sum(p[nz] * np.log2(p[nz] / (px @ py)[nz])))
    return max(mi, 0.0)


def resolution_bound(n: int, b_exponent: float = DEFAULT_B_EXPONENT) -> int:
    """Maximum number of grid cells, ``ceil(n ** b_exponent)`` but never below 4."""
    return max(math.ceil(n ** b_exponent - 1e-12), 4)


def _paired(x, y):
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.shape != y.shape:
        raise ValueError("x and y differ in length")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("inputs must be finite")
    if x.size < MIN_N:
        raise DegenerateInput(f"MIC needs at least {MIN_N} points, got {x.size}")
    return x, y


def _group_blocks(sizes, nbins: int) -> np.ndarray:
    """Assign consecutive atomic blocks to at most ``nbins`` groups of near-equal mass.

    A new group is opened when adding the next block would move the current
    group further from its target size than leaving it as is; the target is
    re-spread over the remaining groups each time.
    """
    total = int(np.sum(sizes))
    out = np.empty(len(sizes), dtype=int)
    group, filled, consumed = 0, 0, 0
    desired = total / nbins
    for i, s in enumerate(sizes):
        if filled and abs(filled + s - desired) >= abs(filled - desired):
            group += 1
            filled = 0
            desired = (total - consumed) / (nbins - group)
        out[i] = group
        filled += s
        consumed += s
    return out


def equipartition(values, nbins: int) -> np.ndarray:
    """Row index per point splitting ``values`` into ~equal-count bins.

    Equal values always share a bin, so fewer than ``nbins`` bins may result.
    """
    v = np.asarray(values, dtype=float)
    order = np.argsort(v, kind="mergesort")
    sv = v[order]
    starts = np.flatnonzero(np.r_[True, sv[1:] != sv[:-1]])
    sizes = np.diff(np.r_[starts, v.size])
    block_group = _group_blocks(sizes, nbins)
    rows = np.empty(v.size, dtype=int)
    rows[order] = np.repeat(block_group, sizes)
    return rows


def _clumps(x, rows, n_rows):
    """Row-count matrix of the clumps along sorted ``x``.

    Points sharing an x value form one atomic block.  Consecutive blocks that
    all sit in the same row merge into a clump; blocks spanning several rows
    stay on their own.  Optimal column cuts only ever fall between clumps.
    """
    order = np.lexsort((rows, x))
    sx = x[order]
    sr = rows[order]
    starts = np.flatnonzero(np.r_[True, sx[1:] != sx[:-1]])
    ends = np.r_[starts[1:], x.size]
    block_first = sr[starts]
    block_last = sr[ends - 1]
    pure = block_first == block_last
    labels = np.where(pure, block_first, -1)
    new_clump = np.r_[True, (labels[1:] != labels[:-1]) | (labels[1:] < 0)]
    clump_of_block = np.cumsum(new_clump) - 1
    clump_of_point = np.repeat(clump_of_block, ends - starts)
    counts = np.zeros((clump_of_block[-1] + 1, n_rows))
    np.add.at(counts, (clump_of_point, sr), 1.0)
    return counts


def _merge_superclumps(counts, max_clumps):
    if counts.shape[0] <= max_clumps:
        return counts
    groups = _group_blocks(counts.sum(axis=1), max_clumps)
    merged = np.zeros((groups[-1] + 1, counts.shape[1]))
    np.add.at(merged, groups, counts)
    return merged


def _xlog2x(c):
    out = np.zeros_like(c)
    nz = c > 0
    out[nz] = c[nz] * np.log2(c[nz])
    return out


def optimize_axis(counts, n: int, max_cols: int) -> np.ndarray:
    """Best MI for 1..max_cols columns given clump row counts.

    Returns an array ``best`` with ``best[l]`` the maximal mutual information
    (bits) using exactly ``l`` non-empty columns, or ``-inf`` if infeasible.
    """
    k = counts.shape[0]
    cum = np.vstack([np.zeros(counts.shape[1]), np.cumsum(counts, axis=0)])
    row_tot = cum[-1]
    h_rows = -float(np.sum(_xlog2x(row_tot / n)))
    seg = cum[None, :, :] - cum[:, None, :]  # seg[s, t] = counts of clumps s..t-1
    seg_tot = seg.sum(axis=2)
    # per-column term: sum_r p_cr log2(p_cr / p_c), additive over columns
    g = (_xlog2x(seg).sum(axis=2) - _xlog2x(seg_tot)) / n
    s_idx, t_idx = np.indices(g.shape)
    g[s_idx >= t_idx] = -np.inf

    best = np.full(max_cols + 1, -np.inf)
    f = g[0].copy()  # one column covering clumps 0..t-1
    best[1] = h_rows + f[k]
    for cols in range(2, min(max_cols, k) + 1):
        f = np.max(f[:, None] + g, axis=0)
        best[cols] = h_rows + f[k]
    finite = np.isfinite(best)
    best[finite] = np.maximum(best[finite], 0.0)
    return best


def _one_orientation(x, y, bound, clump_factor, scores):
    """Fill ``scores[(cols, rows)]`` with normalized MI, ``y`` equipartitioned."""
    n = x.size
    for n_rows in range(2, bound // 2 + 1):
        max_cols = bound // n_rows
        if max_cols < 2:
            break
        rows = equipartition(y, n_rows)
        counts = _clumps(x, rows, n_rows)
        counts = _merge_superclumps(counts, clump_factor * max_cols)
        best = optimize_axis(counts, n, max_cols)
        for cols in range(2, max_cols + 1):
            if np.isfinite(best[cols]):
                val = best[cols] / math.log2(min(cols, n_rows))
                key = (cols, n_rows)
                scores[key] = max(scores.get(key, 0.0), val)


def characteristic_matrix(x, y, b_exponent: float = DEFAULT_B_EXPONENT,
                          clump_factor: int = DEFAULT_CLUMP_FACTOR) -> dict[tuple[int, int], float]:
    """Approximate normalized MI per grid size ``(x columns, y rows)``."""
    x, y = _paired(x, y)
    bound = resolution_bound(x.size, b_exponent)
    forward: dict = {}
    _one_orientation(x, y, bound, clump_factor, forward)
    swapped: dict = {}
    _one_orientation(y, x, bound, clump_factor, swapped)
    out = dict(forward)
    # swapped keys are (y parts, x parts)
    for (y_parts, x_parts), val in swapped.items():
        key = (x_parts, y_parts)
        out[key] = max(out.get(key, 0.0), val)
    return out


def mic(x, y, b_exponent: float = DEFAULT_B_EXPONENT,
        clump_factor: int = DEFAULT_CLUMP_FACTOR) -> float:
    """Maximal information coefficient in [0, 1]."""
    matrix = characteristic_matrix(x, y, b_exponent, clump_factor)
    if not matrix:
        return 0.0
    return float(min(1.0, max(matrix.values())))


def _cut_points(v):
    distinct = np.unique(v)
    return (distinct[1:] + distinct[:-1]) / 2.0


def grid_counts(x, y, x_cuts, y_cuts) -> Grid:
    """Cell counts of the grid with the given interior cut positions."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    cols = np.searchsorted(np.asarray(x_cuts, dtype=float), x, side="right")
    rows = np.searchsorted(np.asarray(y_cuts, dtype=float), y, side="right")
    a, b = len(x_cuts) + 1, len(y_cuts) + 1
    counts = np.zeros((a, b))
    np.add.at(counts, (cols, rows), 1.0)
    return Grid(a, b, tuple(float(c) for c in x_cuts), tuple(float(c) for c in y_cuts), counts)


def mic_exact(x, y, max_n: int = 12, b_exponent: float = DEFAULT_B_EXPONENT,
              return_grid: bool = False):
    """Exact MIC by enumerating every cut subset on both axes.

    Cuts are placed only between distinct values.  Exponential in ``n``;
    refuses inputs longer than ``max_n``.
    """
    x, y = _paired(x, y)
    n = x.size
    if n > max_n:
        raise InputTooLarge(f"exhaustive MIC limited to n <= {max_n}, got {n}")
    bound = resolution_bound(n, b_exponent)
    gx, gy = _cut_points(x), _cut_points(y)
    best_val, best_grid = 0.0, None
    for a in range(2, bound // 2 + 1):
        if a - 1 > len(gx):
            break
        for b in range(2, bound // a + 1):
            if b - 1 > len(gy):
                break
            norm = math.log2(min(a, b))
            y_parts = [np.searchsorted(np.array(c), y, side="right")
                       for c in itertools.combinations(gy, b - 1)]
            y_cut_sets = list(itertools.combinations(gy, b - 1))
            for xc in itertools.combinations(gx, a - 1):
                cols = np.searchsorted(np.array(xc), x, side="right")
                for yc, rows in zip(y_cut_sets, y_parts):
                    counts = np.zeros((a, b))
                    np.add.at(counts, (cols, rows), 1.0)
                    val = mutual_information(counts / n) / norm
                    if val > best_val + 1e-15:
                        best_val = val
                        best_grid = Grid(a, b, xc, yc, counts)
    best_val = float(min(best_val, 1.0))
    return (best_val, best_grid) if return_grid else best_val
