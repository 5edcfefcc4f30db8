"""Exhaustive enumeration of size-k supports under squared-error losses.

Ground truth for desk-scale correctness checks: every support of the given
size is scored by its exact optimal objective and the best one is returned.
Only squared-error losses are supported because only they admit the
closed-form per-support objective that keeps enumeration honest and fast.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .core import as_design, as_responses
from .errors import InfeasibleBudget, TooLarge
from .saddle import _require_ols, ols_objective

MAX_SUPPORTS = 10**6


@dataclass
class EnumerationResult:
    """Best support found, its objective, and optionally every candidate."""

    support: np.ndarray
    objective: float
    num_evaluated: int
    table: list | None = None


def exhaustive_best_subset(
    X, Y, k: int, gamma: float, losses=None, keep_table: bool = False
) -> EnumerationResult:
    """Enumerate all C(p, k) supports and return the best.

    Ties break toward the lexicographically smallest index tuple because
    enumeration is in lexicographic order and only strict improvements
    displace the incumbent. Refuses to visit more than ``MAX_SUPPORTS``
    candidate supports.
    """
    _require_ols(losses)
    X = as_design(X)
    Y = as_responses(Y)
    n, p = X.values.shape
    if not 1 <= k <= p:
        raise InfeasibleBudget(f"budget k={k} outside [1, {p}]")
    count = math.comb(p, k)
    if count > MAX_SUPPORTS:
        raise TooLarge(f"{count} supports exceed the {MAX_SUPPORTS} enumeration cap")

    # Shared precomputation: per-support objectives need only the k x k
    # principal Gram block and the k x m cross block.
    Xv = X.values
    Yv = Y.values
    gram = Xv.T @ Xv
    cross = Xv.T @ Yv
    y_norm_sq = float(np.sum(Yv * Yv))
    eye = np.eye(k)

    best_tuple = None
    best_value = np.inf
    table = [] if keep_table else None
    for sel in itertools.combinations(range(p), k):
        idx = np.asarray(sel)
        M = eye + gamma * gram[np.ix_(idx, idx)]
        B = cross[idx]
        value = 0.5 * (y_norm_sq - gamma * float(np.sum(B * np.linalg.solve(M, B))))
        if table is not None:
            table.append((sel, value))
        if value < best_value:
            best_value = value
            best_tuple = sel

    support = np.zeros(p, dtype=bool)
    support[list(best_tuple)] = True
    # Report the winner's objective through the same closed form the rest of
    # the package uses, so the two routes agree to machine precision.
    objective = ols_objective(X, Y, support, gamma)
    return EnumerationResult(support, objective, count, table)
