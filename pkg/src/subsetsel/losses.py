"""Loss families and their convex conjugates.

Every response coordinate carries its own loss. Three families are
supported, each paired with the conjugate of ``u -> loss(y, u)``:

==========  =========================  ==============================
kind        loss(y, u)                 conjugate(y, a)
==========  =========================  ==============================
ols         (y - u)^2 / 2              y*a + a^2/2        (a real)
pinball q   max{q(y-u), (1-q)(u-y)}    y*a                (-q <= a <= 1-q)
logistic    log(1 + exp(-y*u))         -H(-y*a)           (y*a in [-1, 0])
==========  =========================  ==============================

where H(x) = -x*log(x) - (1-x)*log(1-x) is the binary entropy with the
0*log(0) = 0 convention. Outside its stated interval a conjugate is
+infinity. Logistic responses must be -1/+1 labels.

All functions broadcast over numpy arrays; scalars work as 0-d arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .errors import DimensionMismatch, DomainBoundary, InvalidLabel, NonFiniteData

OLS = "ols"
PINBALL = "pinball"
LOGISTIC = "logistic"
_KINDS = (OLS, PINBALL, LOGISTIC)

# Interior margin the projection leaves between a logistic dual point and the
# true domain boundary, and the stricter margin below which gradients refuse
# to evaluate. Projected points always stay differentiable.
LOGISTIC_MARGIN = 1e-9
_GRAD_MARGIN = 1e-10


@dataclass(frozen=True)
class LossSpec:
    """One loss family, optionally parameterized (pinball quantile level)."""

    kind: str
    quantile: float | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown loss kind: {self.kind!r}")
        if self.kind == PINBALL:
            q = self.quantile
            if q is None or not (0.0 < q < 1.0):
                raise ValueError(f"pinball quantile must lie in (0, 1), got {q!r}")
        elif self.quantile is not None:
            raise ValueError(f"{self.kind} loss takes no quantile parameter")

    @classmethod
    def parse(cls, text: str) -> "LossSpec":
        """Parse ``"ols"``, ``"logistic"``, or ``"pinball:<level>"``."""
        text = text.strip().lower()
        if text == OLS:
            return cls(OLS)
        if text == LOGISTIC:
            return cls(LOGISTIC)
        if text.startswith(PINBALL):
            rest = text[len(PINBALL):]
            if rest.startswith(":"):
                try:
                    level = float(rest[1:])
                except ValueError as exc:
                    raise ValueError(f"bad pinball level in {text!r}") from exc
                return cls(PINBALL, level)
        raise ValueError(f"cannot parse loss spec {text!r}")

    def label(self) -> str:
        if self.kind == PINBALL:
            return f"pinball:{self.quantile:g}"
        return self.kind


def ols() -> LossSpec:
    return LossSpec(OLS)


def pinball(quantile: float) -> LossSpec:
    return LossSpec(PINBALL, quantile)


def logistic() -> LossSpec:
    return LossSpec(LOGISTIC)


def validate_labels(spec: LossSpec, y) -> None:
    """Raise InvalidLabel unless logistic responses are all -1 or +1."""
    if spec.kind != LOGISTIC:
        return
    y = np.asarray(y, dtype=np.float64)
    if not np.all(np.isin(y, (-1.0, 1.0))):
        bad = np.unique(y[~np.isin(y, (-1.0, 1.0))])
        raise InvalidLabel(f"logistic responses must be -1/+1, found {bad[:5]}")


def loss_eval(spec: LossSpec, y, u):
    """Primal loss value, elementwise."""
    y = np.asarray(y, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    if spec.kind == OLS:
        d = y - u
        return 0.5 * d * d
    if spec.kind == PINBALL:
        q = spec.quantile
        return np.maximum(q * (y - u), (1.0 - q) * (u - y))
    validate_labels(spec, y)
    return np.logaddexp(0.0, -y * u)


def conjugate_eval(spec: LossSpec, y, a):
    """Conjugate value, +inf outside the domain, elementwise."""
    y = np.asarray(y, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    if spec.kind == OLS:
        return y * a + 0.5 * a * a
    if spec.kind == PINBALL:
        q = spec.quantile
        inside = (a >= -q) & (a <= 1.0 - q)
        return np.where(inside, y * a, np.inf)
    validate_labels(spec, y)
    x = -y * a
    inside = (x >= 0.0) & (x <= 1.0)
    xc = np.clip(x, 0.0, 1.0)
    # -H(x) = x log x + (1-x) log(1-x), with xlogy handling the endpoints
    val = xlogy(xc, xc) + xlogy(1.0 - xc, 1.0 - xc)
    return np.where(inside, val, np.inf)


def conjugate_grad(spec: LossSpec, y, a):
    """Derivative of the conjugate in its second argument, elementwise.

    Raises DomainBoundary if any entry sits outside the domain, or for the
    logistic family within ``_GRAD_MARGIN`` of the boundary where the
    derivative diverges. Points produced by :func:`conjugate_project` keep a
    wider ``LOGISTIC_MARGIN`` and therefore always evaluate.
    """
    y = np.asarray(y, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    if spec.kind == OLS:
        return y + a
    if spec.kind == PINBALL:
        q = spec.quantile
        if np.any(a < -q) or np.any(a > 1.0 - q):
            raise DomainBoundary(f"pinball dual outside [{-q}, {1 - q}]")
        return np.broadcast_to(y, np.broadcast(y, a).shape).copy()
    validate_labels(spec, y)
    x = -y * a
    if np.any(x <= _GRAD_MARGIN) or np.any(x >= 1.0 - _GRAD_MARGIN):
        raise DomainBoundary("logistic dual at or beyond the domain boundary")
    return y * (np.log1p(-x) - np.log(x))


def conjugate_bounds(spec: LossSpec, y):
    """Componentwise closed box the projection maps into, as (lo, hi).

    OLS is unconstrained, pinball lives in [-q, 1-q], and the logistic
    family keeps y*a inside [-1 + margin, -margin].
    """
    y = np.asarray(y, dtype=np.float64)
    if spec.kind == OLS:
        return (np.full(y.shape, -np.inf), np.full(y.shape, np.inf))
    if spec.kind == PINBALL:
        q = spec.quantile
        return (np.full(y.shape, -q), np.full(y.shape, 1.0 - q))
    validate_labels(spec, y)
    eps = LOGISTIC_MARGIN
    lo = np.where(y > 0, -1.0 + eps, eps)
    hi = np.where(y > 0, -eps, 1.0 - eps)
    return (lo, hi)


def conjugate_project(spec: LossSpec, y, a):
    """Euclidean projection of ``a`` onto the conjugate's domain."""
    a = np.asarray(a, dtype=np.float64)
    if spec.kind == OLS:
        return a.copy()
    lo, hi = conjugate_bounds(spec, y)
    return np.clip(a, lo, hi)


class ColumnLosses:
    """Per-coordinate loss bookkeeping for an n x m response block.

    Prepares bounds once and exposes whole-matrix conjugate evaluations,
    gradients, projections, and primal totals. A uniform-OLS fast path skips
    projection work entirely; that is the hot case for the solver.
    """

    def __init__(self, specs, Y):
        Y = np.asarray(Y, dtype=np.float64)
        if Y.ndim != 2:
            raise DimensionMismatch("responses must be a 2-D array")
        if len(specs) != Y.shape[1]:
            raise DimensionMismatch(
                f"{len(specs)} losses for {Y.shape[1]} response coordinates"
            )
        if not np.all(np.isfinite(Y)):
            raise NonFiniteData("responses contain NaN or infinite entries")
        self.specs = tuple(specs)
        self.Y = Y
        for t, spec in enumerate(self.specs):
            validate_labels(spec, Y[:, t])
        self.all_ols = all(s.kind == OLS for s in self.specs)
        self.uniform = len(set(self.specs)) <= 1
        if self.all_ols:
            self._lo = None
            self._hi = None
        else:
            lo = np.empty_like(Y)
            hi = np.empty_like(Y)
            for t, spec in enumerate(self.specs):
                lo[:, t], hi[:, t] = conjugate_bounds(spec, Y[:, t])
            self._lo = lo
            self._hi = hi

    @property
    def n(self) -> int:
        return self.Y.shape[0]

    @property
    def m(self) -> int:
        return self.Y.shape[1]

    def column_bounds(self, t: int):
        if self.all_ols:
            n = self.n
            return (np.full(n, -np.inf), np.full(n, np.inf))
        return (self._lo[:, t], self._hi[:, t])

    def conjugate_total(self, A) -> float:
        """Sum of conjugate values over all entries; +inf if any is outside."""
        if self.uniform:
            return float(np.sum(conjugate_eval(self.specs[0], self.Y, A)))
        total = 0.0
        for t, spec in enumerate(self.specs):
            total += float(np.sum(conjugate_eval(spec, self.Y[:, t], A[:, t])))
        return total

    def conjugate_grad_matrix(self, A):
        if self.uniform:
            return conjugate_grad(self.specs[0], self.Y, A)
        out = np.empty_like(self.Y)
        for t, spec in enumerate(self.specs):
            out[:, t] = conjugate_grad(spec, self.Y[:, t], A[:, t])
        return out

    def project_inplace(self, A) -> None:
        if self.all_ols:
            return
        np.clip(A, self._lo, self._hi, out=A)

    def project(self, A):
        A = np.array(A, dtype=np.float64, copy=True)
        self.project_inplace(A)
        return A

    def primal_total(self, U) -> float:
        """Sum of primal losses at fitted values ``U``."""
        if self.uniform:
            return float(np.sum(loss_eval(self.specs[0], self.Y, U)))
        total = 0.0
        for t, spec in enumerate(self.specs):
            total += float(np.sum(loss_eval(spec, self.Y[:, t], U[:, t])))
        return total


def broadcast_losses(specs, m: int) -> tuple[LossSpec, ...]:
    """Extend a loss list to m coordinates by repeating the last entry."""
    specs = tuple(specs)
    if not specs:
        raise ValueError("need at least one loss spec")
    if len(specs) > m:
        raise DimensionMismatch(f"{len(specs)} losses for {m} coordinates")
    return specs + (specs[-1],) * (m - len(specs))
