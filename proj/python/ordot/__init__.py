"""Exact 1-D optimal transport losses for ordinal classification."""

from ._core import (
    Error,
    LossFunction,
    LossKind,
    LossSpec,
    MetricFamily,
    SinkhornConfig,
    SmoothingConfig,
    accuracy,
    ground_matrix,
    lp_oracle,
    mae,
    monotone_coupling,
    qwk,
    run_experiment,
    sinkhorn,
    smooth_label,
    softmax,
    tnr_at_tpr,
    unimodal_distribution,
    wasserstein,
    wasserstein_convex,
    wasserstein_linear,
    wasserstein_onehot,
    wasserstein_step,
)

__all__ = [
    "Error",
    "LossFunction",
    "LossKind",
    "LossSpec",
    "MetricFamily",
    "SinkhornConfig",
    "SmoothingConfig",
    "accuracy",
    "ground_matrix",
    "lp_oracle",
    "mae",
    "monotone_coupling",
    "qwk",
    "run_experiment",
    "sinkhorn",
    "smooth_label",
    "softmax",
    "tnr_at_tpr",
    "unimodal_distribution",
    "wasserstein",
    "wasserstein_convex",
    "wasserstein_linear",
    "wasserstein_onehot",
    "wasserstein_step",
]
