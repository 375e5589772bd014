# SPDX-License-Identifier: Apache-2.0
"""Certified top-k robustness for Gaussian-smoothed multi-label classifiers."""

from ._mlcert import (
    CertificationInstance,
    CertifiedResult,
    ProbabilityBounds,
    SmoothingConfig,
    SyntheticClassifier,
    __version__,
    baseline_per_label,
    beta_quantile,
    certified_intersection_size,
    certified_radius,
    condition_holds,
    count_frequencies,
    estimate_bounds,
    exact_bounds,
    exact_label_probabilities,
    exhaustive_attack,
    format_counts,
    gaussian_cdf,
    gaussian_quantile,
    instance_metrics,
    parse_counts,
    predict_topk,
    regularized_incomplete_beta,
    sweep,
)

__all__ = [
    "CertificationInstance",
    "CertifiedResult",
    "ProbabilityBounds",
    "SmoothingConfig",
    "SyntheticClassifier",
    "__version__",
    "baseline_per_label",
    "beta_quantile",
    "certified_intersection_size",
    "certified_radius",
    "condition_holds",
    "count_frequencies",
    "estimate_bounds",
    "exact_bounds",
    "exact_label_probabilities",
    "exhaustive_attack",
    "format_counts",
    "gaussian_cdf",
    "gaussian_quantile",
    "instance_metrics",
    "parse_counts",
    "predict_topk",
    "regularized_incomplete_beta",
    "sweep",
]
