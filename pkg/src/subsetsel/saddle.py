"""Saddle-point machinery behind the selector.

The selection problem is attacked through a dual function that is concave in
an n x m dual block ``alpha`` and linear in the binary support ``s``:

    f(alpha, s) = - sum_{t,i} conjugate_t(Y[i,t], alpha[i,t])
                  - (gamma/2) * sum_j s_j * score_j(alpha)

where ``score_j(alpha) = sum_t (X_j . alpha[:,t])^2``. Because each support
coefficient multiplies a non-positive quantity, minimizing over supports of
size at most k keeps the k largest scores. With squared-error losses the
inner maximization over ``alpha`` has a closed form, implemented here both
through a small-support (Woodbury) route and a dense solve.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import as_design, as_responses
from .errors import DimensionMismatch, IndexOutOfRange, InfeasibleBudget, NotOLS
from .losses import ColumnLosses

__all__ = [
    "DualState",
    "feature_score",
    "feature_scores",
    "eval_f",
    "grad_alpha_f",
    "min_s",
    "ols_alpha_closed_form",
    "ols_objective",
]


@dataclass
class DualState:
    """A dual iterate, its running average, and the iteration counter."""

    alpha: np.ndarray
    alpha_avg: np.ndarray
    iteration: int


def _alpha_values(alpha) -> np.ndarray:
    if isinstance(alpha, DualState):
        alpha = alpha.alpha
    alpha = np.asarray(alpha, dtype=np.float64)
    if alpha.ndim == 1:
        alpha = alpha.reshape(-1, 1)
    if alpha.ndim != 2:
        raise DimensionMismatch(f"dual block must be 2-D, got shape {alpha.shape}")
    return alpha


def feature_scores(X, alpha) -> np.ndarray:
    """All p per-column scores sum_t (X_j . alpha[:,t])^2 at once."""
    Xv = as_design(X).values
    A = _alpha_values(alpha)
    if Xv.shape[0] != A.shape[0]:
        raise DimensionMismatch(
            f"design has {Xv.shape[0]} rows, dual block has {A.shape[0]}"
        )
    G = Xv.T @ A
    return np.einsum("jt,jt->j", G, G)


def feature_score(X, alpha, j: int) -> float:
    """Score of a single column j in O(n m)."""
    X = as_design(X)
    if not 0 <= j < X.p:
        raise IndexOutOfRange(f"feature index {j} outside [0, {X.p})")
    A = _alpha_values(alpha)
    if X.n != A.shape[0]:
        raise DimensionMismatch(f"design has {X.n} rows, dual block has {A.shape[0]}")
    v = X.values[:, j] @ A
    return float(v @ v)


def _weighted_quad(G: np.ndarray, s: np.ndarray) -> float:
    """sum_j s_j * sum_t G[j,t]^2 for a (possibly fractional) weight vector."""
    return float(np.einsum("j,jt,jt->", s, G, G))


def eval_f(X, Y, alpha, s, problem) -> float:
    """Dual saddle value at (alpha, s); -inf if alpha leaves a conjugate domain.

    ``s`` may be fractional, in which case the value is the linear
    interpolation between vertex supports.
    """
    Xv = as_design(X).values
    Yv = as_responses(Y).values
    A = _alpha_values(alpha)
    s = np.asarray(s, dtype=np.float64)
    if s.shape != (Xv.shape[1],):
        raise DimensionMismatch(f"support has shape {s.shape}, expected ({Xv.shape[1]},)")
    columns = ColumnLosses(problem.losses, Yv)
    conj = columns.conjugate_total(A)
    if not np.isfinite(conj):
        return -np.inf
    G = Xv.T @ A
    return -conj - 0.5 * problem.gamma * _weighted_quad(G, s)


def grad_alpha_f(X, Y, alpha, s, problem) -> np.ndarray:
    """Gradient of ``eval_f`` in alpha at interior points.

    Entry (i, t) is ``-conjugate_grad_t(Y[i,t], alpha[i,t])
    - gamma * sum_j s_j X[i,j] (X_j . alpha[:,t])``.
    """
    Xv = as_design(X).values
    Yv = as_responses(Y).values
    A = _alpha_values(alpha)
    s = np.asarray(s, dtype=np.float64)
    if s.shape != (Xv.shape[1],):
        raise DimensionMismatch(f"support has shape {s.shape}, expected ({Xv.shape[1]},)")
    columns = ColumnLosses(problem.losses, Yv)
    grad = -columns.conjugate_grad_matrix(A)
    if np.any(s != 0.0):
        G = Xv.T @ A
        if np.all((s == 0.0) | (s == 1.0)):
            cols = s != 0.0
            grad -= problem.gamma * (Xv[:, cols] @ G[cols, :])
        else:
            grad -= problem.gamma * (Xv @ (s[:, None] * G))
    return grad


def min_s(scores: np.ndarray, k: int) -> np.ndarray:
    """Boolean support keeping the k largest scores.

    Ties break toward the lowest index; the result is deterministic.
    """
    scores = np.asarray(scores, dtype=np.float64)
    if scores.ndim != 1:
        raise DimensionMismatch("scores must be 1-D")
    if not 1 <= k <= scores.size:
        raise InfeasibleBudget(f"budget k={k} outside [1, {scores.size}]")
    order = np.argsort(-scores, kind="stable")
    support = np.zeros(scores.size, dtype=bool)
    support[order[:k]] = True
    return support


def _require_ols(losses) -> None:
    if losses is not None and any(spec.kind != "ols" for spec in losses):
        raise NotOLS("closed-form route requires squared-error losses on every coordinate")


def _support_columns(s, p: int) -> np.ndarray:
    s = np.asarray(s)
    if s.dtype == bool:
        if s.shape != (p,):
            raise DimensionMismatch(f"support has shape {s.shape}, expected ({p},)")
        return np.flatnonzero(s)
    s = np.asarray(s, dtype=np.float64)
    if s.shape != (p,):
        raise DimensionMismatch(f"support has shape {s.shape}, expected ({p},)")
    return np.flatnonzero(s != 0.0)


def ols_alpha_closed_form(X, Y, s, gamma: float, losses=None) -> np.ndarray:
    """Exact dual maximizer for a fixed support under squared-error losses.

    Solves ``alpha = -(I + gamma X_s X_s^T)^{-1} Y`` one response coordinate
    at a time (vectorized). Uses the Woodbury identity when the support has
    at most n/2 columns and a dense n x n solve otherwise. ``gamma`` may be
    zero here, in which case the result is exactly ``-Y``.
    """
    _require_ols(losses)
    Xv = as_design(X).values
    Yv = as_responses(Y).values
    if Xv.shape[0] != Yv.shape[0]:
        raise DimensionMismatch(f"design has {Xv.shape[0]} rows, responses {Yv.shape[0]}")
    gamma = float(gamma)
    if gamma < 0.0 or not np.isfinite(gamma):
        raise ValueError(f"gamma must be finite and non-negative, got {gamma}")
    sel = _support_columns(s, Xv.shape[1])
    n = Xv.shape[0]
    if sel.size == 0 or gamma == 0.0:
        return -Yv.copy()
    Xs = Xv[:, sel]
    if 2 * sel.size <= n:
        M = gamma * (Xs.T @ Xs)
        M[np.diag_indices_from(M)] += 1.0
        Z = np.linalg.solve(M, Xs.T @ Yv)
        return gamma * (Xs @ Z) - Yv
    A = gamma * (Xs @ Xs.T)
    A[np.diag_indices_from(A)] += 1.0
    return -np.linalg.solve(A, Yv)


def ols_objective(X, Y, s, gamma: float, losses=None) -> float:
    """Optimal primal value for a fixed support under squared-error losses.

    Equals ``0.5 * sum_t Y_t^T (I + gamma X_s X_s^T)^{-1} Y_t``; for an empty
    support this is half the squared Frobenius norm of the responses.
    """
    Yv = as_responses(Y).values
    alpha = ols_alpha_closed_form(X, Y, s, gamma, losses)
    return float(-0.5 * np.sum(Yv * alpha))
