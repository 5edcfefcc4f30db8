"""Fixed-length embeddings that turn structured responses into blocks.

Distributional observations become rows of quantile or kernel-density
evaluations on a shared grid, and graph observations become vectorized
Laplacians. Stacking n embedded rows yields a ResponseBlock, after which
selection proceeds exactly as for plain vector responses; with quantile
rows and squared-error losses, squared Euclidean row distance is a weighted
2-Wasserstein distance between the underlying distributions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ResponseBlock
from .errors import (
    AsymmetricAdjacency,
    DimensionMismatch,
    GridMismatch,
    NonFiniteData,
    NonPositiveBandwidth,
    TooFewSamples,
)

__all__ = [
    "QuantileCurve",
    "DensityCurve",
    "GraphSpec",
    "default_levels",
    "empirical_quantiles",
    "kde_density",
    "wasserstein2",
    "laplacian_embed",
    "stack_quantile_curves",
    "quantile_block_from_samples",
]


def default_levels(m: int) -> np.ndarray:
    """Interior quantile grid (r - 1/2) / m for r = 1..m.

    Staying strictly inside (0, 1) keeps every level well-defined for
    finite samples, at the cost of never evaluating the exact extremes.
    """
    if m < 1:
        raise DimensionMismatch("need at least one level")
    return (np.arange(m) + 0.5) / m


def _check_levels(levels) -> np.ndarray:
    levels = np.asarray(levels, dtype=np.float64)
    if levels.ndim != 1 or levels.size < 1:
        raise DimensionMismatch("levels must be a non-empty 1-D array")
    if np.any(levels <= 0.0) or np.any(levels >= 1.0):
        raise GridMismatch("levels must lie strictly inside (0, 1)")
    if np.any(np.diff(levels) <= 0.0):
        raise GridMismatch("levels must be strictly increasing")
    return levels


@dataclass
class QuantileCurve:
    """A quantile function sampled on an increasing grid of levels."""

    levels: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.levels = _check_levels(self.levels)
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != self.levels.shape:
            raise DimensionMismatch("levels and values must have equal length")
        if not np.all(np.isfinite(self.values)):
            raise NonFiniteData("quantile values must be finite")
        if np.any(np.diff(self.values) < 0.0):
            raise DimensionMismatch("quantile values must be non-decreasing")


@dataclass
class DensityCurve:
    """A density estimate sampled on an evaluation grid."""

    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=np.float64)
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.grid.ndim != 1 or self.grid.shape != self.values.shape:
            raise DimensionMismatch("grid and values must be matching 1-D arrays")
        if np.any(self.values < 0.0):
            raise NonFiniteData("density values must be non-negative")


def empirical_quantiles(samples, levels) -> QuantileCurve:
    """Empirical quantile curve with mid-point plotting positions.

    Order statistic i (1-based) sits at probability (i - 1/2) / n; levels
    between positions interpolate linearly and levels beyond the extreme
    positions clamp to the extreme order statistics.
    """
    samples = np.asarray(samples, dtype=np.float64).ravel()
    if samples.size < 2:
        raise TooFewSamples("empirical quantiles need at least two samples")
    if not np.all(np.isfinite(samples)):
        raise NonFiniteData("samples must be finite")
    levels = _check_levels(levels)
    values = np.quantile(samples, levels, method="hazen")
    return QuantileCurve(levels, values)


def kde_density(samples, bandwidth: float, grid) -> DensityCurve:
    """Gaussian kernel density estimate on a fixed grid.

    value(g) = (1 / (n h)) * sum_j K((Y_j - g) / h) with the standard
    normal kernel K.
    """
    samples = np.asarray(samples, dtype=np.float64).ravel()
    if samples.size < 1:
        raise TooFewSamples("kernel density needs at least one sample")
    if not np.all(np.isfinite(samples)):
        raise NonFiniteData("samples must be finite")
    if not (float(bandwidth) > 0.0):
        raise NonPositiveBandwidth(f"bandwidth must be positive, got {bandwidth}")
    grid = np.asarray(grid, dtype=np.float64).ravel()
    z = (samples[None, :] - grid[:, None]) / bandwidth
    kernel = np.exp(-0.5 * z * z) / np.sqrt(2.0 * np.pi)
    values = kernel.sum(axis=1) / (samples.size * bandwidth)
    return DensityCurve(grid, values)


def _trapezoid_weights(levels: np.ndarray) -> np.ndarray:
    m = levels.size
    if m == 1:
        return np.ones(1)
    w = np.empty(m)
    w[0] = 0.5 * (levels[1] - levels[0])
    w[-1] = 0.5 * (levels[-1] - levels[-2])
    w[1:-1] = 0.5 * (levels[2:] - levels[:-2])
    return w


def wasserstein2(a: QuantileCurve, b: QuantileCurve, weights: str = "trapezoid") -> float:
    """2-Wasserstein distance between two quantile curves on a shared grid.

    Approximates the integral of the squared quantile difference over the
    unit interval with trapezoid weights on the level grid ("trapezoid") or
    a flat 1/m weight ("uniform"), then takes the square root.
    """
    if a.levels.shape != b.levels.shape or not np.array_equal(a.levels, b.levels):
        raise GridMismatch("curves must share an identical level grid")
    if weights == "trapezoid":
        w = _trapezoid_weights(a.levels)
    elif weights == "uniform":
        w = np.full(a.levels.size, 1.0 / a.levels.size)
    else:
        raise ValueError(f"unknown weight scheme {weights!r}")
    d = a.values - b.values
    return float(np.sqrt(np.sum(w * d * d)))


@dataclass
class GraphSpec:
    """A weighted undirected graph on a fixed vertex set."""

    adjacency: np.ndarray

    def __post_init__(self):
        A = np.asarray(self.adjacency, dtype=np.float64)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise DimensionMismatch(f"adjacency must be square, got {A.shape}")
        if not np.all(np.isfinite(A)):
            raise NonFiniteData("adjacency must be finite")
        if np.any(A < 0.0):
            raise AsymmetricAdjacency("adjacency weights must be non-negative")
        if not np.array_equal(A, A.T):
            raise AsymmetricAdjacency("adjacency must be symmetric")
        if np.any(np.diag(A) != 0.0):
            raise AsymmetricAdjacency("adjacency diagonal must be zero")
        self.adjacency = A

    @property
    def num_vertices(self) -> int:
        return self.adjacency.shape[0]


def laplacian_embed(graph: GraphSpec) -> np.ndarray:
    """Row-major vectorization of the graph Laplacian degree - adjacency."""
    A = graph.adjacency
    L = np.diag(A.sum(axis=1)) - A
    return L.ravel()


def stack_quantile_curves(curves) -> ResponseBlock:
    """Stack curves sharing one level grid into an n x m response block."""
    curves = list(curves)
    if not curves:
        raise DimensionMismatch("need at least one curve")
    levels = curves[0].levels
    for c in curves[1:]:
        if not np.array_equal(c.levels, levels):
            raise GridMismatch("all curves must share an identical level grid")
    values = np.vstack([c.values for c in curves])
    labels = [f"q{lev:g}" for lev in levels]
    return ResponseBlock(values, labels)


def quantile_block_from_samples(sample_sets, levels=None, m: int | None = None) -> ResponseBlock:
    """Embed n sample sets as rows of quantile evaluations on one grid."""
    if levels is None:
        if m is None:
            raise DimensionMismatch("provide levels or a grid size m")
        levels = default_levels(m)
    curves = [empirical_quantiles(s, levels) for s in sample_sets]
    return stack_quantile_curves(curves)
