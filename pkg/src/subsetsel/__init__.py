"""Budgeted feature selection for multi-response regression.

Selects at most k features (or feature groups) jointly across all response
coordinates by solving a saddle-point dual of the penalized selection
problem with a projected subgradient method. Squared-error, pinball, and
logistic losses are supported per coordinate, and structured responses
(distributions, graphs) enter through fixed-length embeddings.
"""

from .core import (
    DesignMatrix,
    GroupStructure,
    ResponseBlock,
    SelectionProblem,
    SelectionResult,
    StandardizationRecord,
    center_responses,
    standardize,
)
from .embeddings import (
    DensityCurve,
    GraphSpec,
    QuantileCurve,
    default_levels,
    empirical_quantiles,
    kde_density,
    laplacian_embed,
    quantile_block_from_samples,
    stack_quantile_curves,
    wasserstein2,
)
from .losses import (
    LossSpec,
    conjugate_eval,
    conjugate_grad,
    conjugate_project,
    logistic,
    loss_eval,
    ols,
    pinball,
)
from .oracle import EnumerationResult, exhaustive_best_subset
from .saddle import (
    DualState,
    eval_f,
    feature_score,
    feature_scores,
    grad_alpha_f,
    min_s,
    ols_alpha_closed_form,
    ols_objective,
)
from .simulation import (
    MultivariateScenario,
    SimMetrics,
    WassersteinScenario,
    eval_metrics,
    gen_multivariate,
    gen_wasserstein,
    refit_lstsq,
    run_study,
)
from .solver import SolverConfig, fit, fit_group, recover_beta, tightness_certificate

__version__ = "0.1.0"

__all__ = [
    "DesignMatrix",
    "ResponseBlock",
    "GroupStructure",
    "SelectionProblem",
    "SelectionResult",
    "StandardizationRecord",
    "standardize",
    "center_responses",
    "LossSpec",
    "ols",
    "pinball",
    "logistic",
    "loss_eval",
    "conjugate_eval",
    "conjugate_grad",
    "conjugate_project",
    "DualState",
    "feature_score",
    "feature_scores",
    "eval_f",
    "grad_alpha_f",
    "min_s",
    "ols_alpha_closed_form",
    "ols_objective",
    "SolverConfig",
    "fit",
    "fit_group",
    "recover_beta",
    "tightness_certificate",
    "EnumerationResult",
    "exhaustive_best_subset",
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
    "MultivariateScenario",
    "WassersteinScenario",
    "SimMetrics",
    "gen_multivariate",
    "gen_wasserstein",
    "eval_metrics",
    "refit_lstsq",
    "run_study",
    "__version__",
]
