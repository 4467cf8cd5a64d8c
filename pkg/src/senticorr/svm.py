"""Soft-margin linear SVM trained by sequential minimal optimization.

Solves the dual

    min_a  1/2 a^T Q a - e^T a   s.t.  y^T a = 0,  0 <= a_i <= C_i

with ``Q_ij = y_i y_j <x_i, x_j>``, using maximal-violating-pair selection with
second-order working-set choice for the second index.  Identical
``(x, y)`` rows are merged before solving: ``m`` copies of a sample are
equivalent to one sample with box bound ``m * C``, so the optimum is
unchanged while the working dual shrinks considerably on binary features.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numba
import numpy as np

from senticorr.errors import NonConvergenceWarning, SingleClassTrainingSet

TAU = 1e-12
_GRAM_LIMIT = 6000


@dataclass(frozen=True)
class SolverResult:
    weights: np.ndarray
    bias: float
    objective: float
    iterations: int
    converged: bool
    kkt_gap: float


def hinge_objective(weights, bias, X, y, c_param, sample_weight=None) -> float:
    """Primal objective 1/2 ||w||^2 + C * sum_i max(0, 1 - y_i (w.x_i + b))."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    w = np.asarray(weights, dtype=float)
    margins = 1.0 - y * (X @ w + bias) if X.size else 1.0 - y * bias
    losses = np.maximum(0.0, margins)
    if sample_weight is not None:
        losses = losses * sample_weight
    return 0.5 * float(w @ w) + c_param * float(losses.sum())


def _merge_duplicates(X, y):
    keys = np.concatenate([X, y[:, None]], axis=1)
    uniq, counts = np.unique(keys, axis=0, return_counts=True)
    return uniq[:, :-1], uniq[:, -1], counts.astype(float)


def _best_bias(decision, y, upper):
    """Exact minimizer over b of sum_i upper_i * max(0, 1 - y_i (f_i + b)).

    The sum is convex and piecewise linear in ``b`` with breakpoints at
    ``b = y_i - f_i``, so its minimum sits on one of them.
    """
    candidates = np.unique(y - decision)
    best_b, best_val = 0.0, np.inf
    for chunk in np.array_split(candidates, max(1, len(candidates) // 256)):
        margins = 1.0 - y[None, :] * (decision[None, :] + chunk[:, None])
        vals = (upper[None, :] * np.maximum(0.0, margins)).sum(axis=1)
        k = int(np.argmin(vals))
        if vals[k] < best_val:
            best_val, best_b = float(vals[k]), float(chunk[k])
    return best_b, best_val


def _free_sv_bias(alpha, y, grad, upper) -> float:
    free = (alpha > 0) & (alpha < upper)
    yg = y * grad
    if free.any():
        return float(-yg[free].mean())
    # no free vectors: midpoint of the feasible interval for rho
    pos = y > 0
    at_upper = alpha >= upper
    at_lower = alpha <= 0
    ub_mask = (at_upper & ~pos) | (at_lower & pos)
    lb_mask = (at_upper & pos) | (at_lower & ~pos)
    ub = yg[ub_mask].min() if ub_mask.any() else np.inf
    lb = yg[lb_mask].max() if lb_mask.any() else -np.inf
    if not np.isfinite(ub):
        ub = lb
    if not np.isfinite(lb):
        lb = ub
    return float(-(ub + lb) / 2.0)


@numba.njit(cache=True)
def _kernel_row(X, K, use_gram, i, out):
    if use_gram:
        for t in range(K.shape[0]):
            out[t] = K[i, t]
    else:
        for t in range(X.shape[0]):
            acc = 0.0
            for f in range(X.shape[1]):
                acc += X[t, f] * X[i, f]
            out[t] = acc


@numba.njit(cache=True)
def _update_sets(t, alpha, y, upper, up, low):
    if y[t] > 0:
        up[t] = alpha[t] < upper[t]
        low[t] = alpha[t] > 0.0
    else:
        up[t] = alpha[t] > 0.0
        low[t] = alpha[t] < upper[t]


@numba.njit(cache=True)
def _smo_loop(X, K, use_gram, diag, y, upper, tol, obj_tol, max_iter):
    n = y.shape[0]
    alpha = np.zeros(n)
    # score_t = -y_t * grad_t; grad starts at -1
    score = y.copy()
    up = np.empty(n, dtype=np.bool_)
    low = np.empty(n, dtype=np.bool_)
    for t in range(n):
        _update_sets(t, alpha, y, upper, up, low)
    Ki = np.empty(n)
    Kj = np.empty(n)
    gap = np.inf
    it = 0
    converged = False
    pass_len = max(n, 10)
    prev_obj = 0.0
    while it < max_iter:
        if obj_tol > 0.0 and it > 0 and it % pass_len == 0:
            # dual objective 1/2 a^T Q a - e^T a = 1/2 sum_t a_t (grad_t - 1)
            obj = 0.0
            for t in range(n):
                obj += alpha[t] * (-y[t] * score[t] - 1.0)
            obj *= 0.5
            if abs(prev_obj - obj) < obj_tol:
                converged = True
                break
            prev_obj = obj
        i = 0
        m_val = -np.inf
        M_val = np.inf
        for t in range(n):
            s_up = score[t] if up[t] else -np.inf
            s_low = score[t] if low[t] else np.inf
            if s_up > m_val:
                m_val = s_up
                i = t
            M_val = min(M_val, s_low)
        gap = m_val - M_val
        if gap < tol:
            converged = True
            break

        _kernel_row(X, K, use_gram, i, Ki)
        d_i = diag[i]
        j = 0
        best = np.inf
        for t in range(n):
            b = m_val - score[t]
            a = d_i + diag[t] - 2.0 * Ki[t]
            a = a if a > 0.0 else TAU
            val = -(b * b) / a if (low[t] and b > 0.0) else np.inf
            if val < best:
                best = val
                j = t
        _kernel_row(X, K, use_gram, j, Kj)
        a_ij = d_i + diag[j] - 2.0 * Ki[j]
        if a_ij <= 0.0:
            a_ij = TAU
        lam = (m_val - score[j]) / a_ij
        lim_i = upper[i] - alpha[i] if y[i] > 0 else alpha[i]
        lim_j = alpha[j] if y[j] > 0 else upper[j] - alpha[j]
        lam = min(lam, lim_i, lim_j)
        alpha[i] += y[i] * lam
        alpha[j] -= y[j] * lam
        # clamp drift so bound tests stay exact
        for t in (i, j):
            if alpha[t] < 1e-14 * upper[t]:
                alpha[t] = 0.0
            elif alpha[t] > upper[t] * (1.0 - 1e-14):
                alpha[t] = upper[t]
            _update_sets(t, alpha, y, upper, up, low)
        for t in range(n):
            score[t] -= lam * (Ki[t] - Kj[t])
        it += 1
    grad = -y * score
    return alpha, grad, it, gap, converged


def smo_solve(X, y, c_param: float, tol: float = 1e-3, obj_tol: float = 1e-8,
              max_iter: int = 1_000_000) -> SolverResult:
    """Train a linear SVM with bias.

    Parameters
    ----------
    X : array, shape (n_samples, n_features)
    y : array of +1/-1 labels
    c_param : soft-margin penalty, > 0
    tol : stop once the maximal KKT violation ``m(a) - M(a)`` drops below it
    obj_tol : also stop once the dual objective moves by less than this over
        one pass (``n`` iterations); 0 disables the check
    max_iter : iteration cap; hitting it emits :class:`NonConvergenceWarning`
        and returns the last iterate with ``converged=False``
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise ValueError("X must be 2-D with one row per label")
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise ValueError("labels must be +1 or -1")
    if c_param <= 0:
        raise ValueError("c_param must be positive")
    if np.all(y == y[0]):
        raise SingleClassTrainingSet("training labels are all one class")

    Xm, ym, counts = _merge_duplicates(X, y)
    Xm = np.ascontiguousarray(Xm)
    upper = c_param * counts
    use_gram = Xm.shape[0] <= _GRAM_LIMIT
    K = Xm @ Xm.T if use_gram else np.zeros((1, 1))
    diag = np.einsum("ij,ij->i", Xm, Xm)
    alpha, grad, it, gap, converged = _smo_loop(Xm, K, use_gram, diag, ym, upper, tol, obj_tol, max_iter)
    if not converged:
        warnings.warn(
            f"SMO did not converge in {max_iter} iterations (KKT gap {gap:.3g})",
            NonConvergenceWarning,
            stacklevel=2,
        )

    w = (alpha * ym) @ Xm
    f = Xm @ w
    bias = _free_sv_bias(alpha, ym, grad, upper)
    loss = float((upper * np.maximum(0.0, 1.0 - ym * (f + bias))).sum())
    polished, polished_loss = _best_bias(f, ym, upper)
    if polished_loss < loss - 1e-12 * (1.0 + loss):
        bias = polished
    return SolverResult(
        weights=w,
        bias=bias,
        objective=hinge_objective(w, bias, X, y, c_param),
        iterations=int(it),
        converged=bool(converged),
        kkt_gap=float(gap),
    )
