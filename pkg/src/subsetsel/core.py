"""Data model: design matrices, response blocks, problems, results.

Rows are observations throughout. Responses live in a block with one column
per coordinate of the (possibly vector-valued or embedded) response, and
each coordinate carries its own loss. No intercept column is ever added
implicitly; standardization is explicit and recorded so it can be undone.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from .errors import (
    ConstantColumn,
    CsvFormatError,
    DimensionMismatch,
    InfeasibleBudget,
    InvalidGrouping,
    InvalidPenalty,
    NonFiniteData,
    TooFewSamples,
)
from .losses import LossSpec, validate_labels


def _as_matrix(values, what: str) -> np.ndarray:
    values = np.ascontiguousarray(values, dtype=np.float64)
    if values.ndim == 1:
        values = values.reshape(-1, 1)
    if values.ndim != 2:
        raise DimensionMismatch(f"{what} must be 2-D, got shape {values.shape}")
    if values.shape[0] < 1 or values.shape[1] < 1:
        raise DimensionMismatch(f"{what} must be non-empty, got shape {values.shape}")
    if not np.all(np.isfinite(values)):
        raise NonFiniteData(f"{what} contains NaN or infinite entries")
    return values


class DesignMatrix:
    """Feature matrix (n observations by p candidate features)."""

    def __init__(self, values, feature_names=None):
        self.values = _as_matrix(values, "design matrix")
        n, p = self.values.shape
        if feature_names is None:
            feature_names = [f"x{j + 1}" for j in range(p)]
        feature_names = [str(s) for s in feature_names]
        if len(feature_names) != p:
            raise DimensionMismatch(
                f"{len(feature_names)} feature names for {p} columns"
            )
        self.feature_names = feature_names
        self._norms_sq = None

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]

    @property
    def column_norms_sq(self) -> np.ndarray:
        """Cached squared Euclidean norm of each column."""
        if self._norms_sq is None:
            self._norms_sq = np.einsum("ij,ij->j", self.values, self.values)
        return self._norms_sq

    @classmethod
    def from_csv(cls, path) -> "DesignMatrix":
        frame = read_numeric_csv(path)
        return cls(frame.to_numpy(dtype=np.float64), list(frame.columns))


class ResponseBlock:
    """Response matrix (n observations by m coordinates)."""

    def __init__(self, values, coordinate_labels=None):
        self.values = _as_matrix(values, "response block")
        n, m = self.values.shape
        if coordinate_labels is None:
            coordinate_labels = [f"y{t + 1}" for t in range(m)]
        coordinate_labels = [str(s) for s in coordinate_labels]
        if len(coordinate_labels) != m:
            raise DimensionMismatch(
                f"{len(coordinate_labels)} labels for {m} coordinates"
            )
        self.coordinate_labels = coordinate_labels

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1]

    @classmethod
    def from_csv(cls, path) -> "ResponseBlock":
        frame = read_numeric_csv(path)
        return cls(frame.to_numpy(dtype=np.float64), list(frame.columns))


def as_design(X) -> DesignMatrix:
    return X if isinstance(X, DesignMatrix) else DesignMatrix(X)


def as_responses(Y) -> ResponseBlock:
    return Y if isinstance(Y, ResponseBlock) else ResponseBlock(Y)


class GroupStructure:
    """Partition of the p feature columns into q non-empty groups.

    ``assignment[j]`` is the group index of column j, in ``range(q)``.
    Selecting a group selects all of its columns at once.
    """

    def __init__(self, assignment, num_groups=None):
        assignment = np.ascontiguousarray(assignment, dtype=np.int64)
        if assignment.ndim != 1 or assignment.size < 1:
            raise InvalidGrouping("assignment must be a non-empty 1-D integer array")
        q = int(assignment.max()) + 1 if num_groups is None else int(num_groups)
        if assignment.min() < 0 or assignment.max() >= q:
            raise InvalidGrouping(f"group indices must lie in [0, {q})")
        sizes = np.bincount(assignment, minlength=q)
        if np.any(sizes == 0):
            empty = int(np.flatnonzero(sizes == 0)[0])
            raise InvalidGrouping(f"group {empty} has no columns")
        self.assignment = assignment
        self.q = q
        self.sizes = sizes

    @property
    def p(self) -> int:
        return self.assignment.size

    @classmethod
    def singleton(cls, p: int) -> "GroupStructure":
        """One group per column; group selection degenerates to plain selection."""
        return cls(np.arange(p, dtype=np.int64), p)

    @classmethod
    def from_labels(cls, labels) -> "GroupStructure":
        """Map arbitrary labels to group indices by order of first appearance."""
        seen: dict = {}
        assignment = np.empty(len(labels), dtype=np.int64)
        for j, lab in enumerate(labels):
            if lab not in seen:
                seen[lab] = len(seen)
            assignment[j] = seen[lab]
        return cls(assignment, len(seen))

    def aggregate(self, column_scores: np.ndarray) -> np.ndarray:
        """Sum per-column scores within each group."""
        return np.bincount(
            self.assignment, weights=column_scores, minlength=self.q
        )

    def column_mask(self, group_support: np.ndarray) -> np.ndarray:
        """Expand a boolean support over groups to a boolean mask over columns."""
        return np.asarray(group_support, dtype=bool)[self.assignment]


@dataclass(frozen=True)
class SelectionProblem:
    """What to solve: per-coordinate losses, budget k, ridge weight gamma.

    The primal being targeted is

        min over beta with at most k active rows (or groups) of
            sum_t sum_i loss_t(Y[i,t], (X beta)[i,t]) + ||beta||_F^2 / (2 gamma)

    Larger gamma means weaker ridge shrinkage.
    """

    losses: tuple
    k: int
    gamma: float
    groups: GroupStructure | None = None

    def __post_init__(self):
        object.__setattr__(self, "losses", tuple(self.losses))
        if not self.losses or not all(isinstance(s, LossSpec) for s in self.losses):
            raise ValueError("losses must be a non-empty sequence of LossSpec")
        if int(self.k) != self.k or self.k < 1:
            raise InfeasibleBudget(f"budget k must be a positive integer, got {self.k}")
        object.__setattr__(self, "k", int(self.k))
        gamma = float(self.gamma)
        if not np.isfinite(gamma) or gamma <= 0.0:
            raise InvalidPenalty(f"gamma must be positive and finite, got {self.gamma}")
        object.__setattr__(self, "gamma", gamma)

    @classmethod
    def ols(cls, m: int, k: int, gamma: float, groups=None) -> "SelectionProblem":
        """Squared-error loss on every one of m coordinates."""
        return cls((LossSpec("ols"),) * m, k, gamma, groups)

    @property
    def m(self) -> int:
        return len(self.losses)

    def validate_against(self, X: DesignMatrix, Y: ResponseBlock) -> None:
        if X.n != Y.n:
            raise DimensionMismatch(
                f"design has {X.n} rows but responses have {Y.n}"
            )
        if len(self.losses) != Y.m:
            raise DimensionMismatch(
                f"{len(self.losses)} losses for {Y.m} response coordinates"
            )
        units = self.groups.q if self.groups is not None else X.p
        if self.groups is not None and self.groups.p != X.p:
            raise DimensionMismatch(
                f"group assignment covers {self.groups.p} columns, design has {X.p}"
            )
        if self.k > units:
            raise InfeasibleBudget(f"budget k={self.k} exceeds {units} selectable units")
        for t, spec in enumerate(self.losses):
            validate_labels(spec, Y.values[:, t])


@dataclass
class StandardizationRecord:
    """Column means/scales (and response offsets) needed to undo preprocessing."""

    means: np.ndarray
    scales: np.ndarray
    response_offsets: np.ndarray | None = None

    def transform(self, values: np.ndarray) -> np.ndarray:
        return (np.asarray(values, dtype=np.float64) - self.means) / self.scales

    def invert(self, values: np.ndarray) -> np.ndarray:
        return np.asarray(values, dtype=np.float64) * self.scales + self.means


def standardize(X) -> tuple[DesignMatrix, StandardizationRecord]:
    """Center and scale each design column to mean 0 and unit sample sd.

    The sample standard deviation uses the n-1 divisor. Raises
    ConstantColumn for zero-variance columns and TooFewSamples for n < 2.
    """
    X = as_design(X)
    if X.n < 2:
        raise TooFewSamples("standardization needs at least two observations")
    means = X.values.mean(axis=0)
    scales = X.values.std(axis=0, ddof=1)
    bad = np.flatnonzero(scales == 0.0)
    if bad.size:
        j = int(bad[0])
        raise ConstantColumn(j, X.feature_names[j])
    out = DesignMatrix((X.values - means) / scales, list(X.feature_names))
    return out, StandardizationRecord(means, scales)


def center_responses(Y, losses=None) -> tuple[ResponseBlock, np.ndarray]:
    """Center each response coordinate, leaving logistic label columns alone.

    Returns the centered block and the per-coordinate offsets that were
    removed (zero for label columns).
    """
    Y = as_responses(Y)
    offsets = Y.values.mean(axis=0)
    if losses is not None:
        for t, spec in enumerate(losses):
            if spec.kind == "logistic":
                offsets[t] = 0.0
    out = ResponseBlock(Y.values - offsets, list(Y.coordinate_labels))
    return out, offsets


@dataclass
class SelectionResult:
    """Outcome of a fit.

    ``support`` is a boolean mask over columns; ``group_support`` is the
    mask over groups when the problem was grouped (None otherwise). Rows of
    ``beta`` outside the support are exactly zero. ``objective`` is the
    primal value attained on the data the solver actually saw (standardized
    when standardization was on). ``scores`` holds the final per-unit
    selection scores, unnegated and unscaled; ``tight``/``gap`` certify
    whether those scores had an unambiguous top-k.
    """

    support: np.ndarray
    beta: np.ndarray
    objective: float
    tight: bool
    gap: float
    iterations: int
    wall_time_s: float
    scores: np.ndarray
    intercept: np.ndarray
    group_support: np.ndarray | None = None
    mode: str = "subgradient"
    feature_names: list = field(default_factory=list)

    @property
    def selected(self) -> np.ndarray:
        """Indices of selected columns, ascending."""
        return np.flatnonzero(self.support)

    @property
    def num_selected(self) -> int:
        return int(np.count_nonzero(self.support))

    @property
    def selected_names(self) -> list:
        names = self.feature_names
        return [names[j] for j in self.selected] if names else []


def read_numeric_csv(path) -> pd.DataFrame:
    """Read a headered, all-numeric CSV strictly.

    Rejects missing headers (a first row that parses entirely as numbers),
    non-numeric cells, and NaN/Inf values.
    """
    try:
        frame = pd.read_csv(path)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
        raise CsvFormatError(f"cannot read {path}: {exc}") from exc
    if frame.shape[0] < 1 or frame.shape[1] < 1:
        raise CsvFormatError(f"{path} has no data rows")

    def _is_number(text: str) -> bool:
        try:
            float(text)
        except (TypeError, ValueError):
            return False
        return True

    if all(_is_number(c) for c in frame.columns):
        raise CsvFormatError(f"{path} appears to be missing a header row")
    for col in frame.columns:
        if not np.issubdtype(frame[col].dtype, np.number):
            raise CsvFormatError(f"{path}: column {col!r} is not numeric")
    values = frame.to_numpy(dtype=np.float64)
    if np.isnan(values).any():
        raise NonFiniteData(f"{path} contains NaN entries")
    if np.isinf(values).any():
        raise NonFiniteData(f"{path} contains infinite entries")
    return frame
