"""Evaluation statistics for hypothesis sets."""

from .curves import moving_average_curve
from .inference import (
    AnovaResult,
    PairwiseResult,
    average_ranks,
    format_pairwise_table,
    one_way_anova,
    pairwise_bonferroni,
    spearman_rho,
)
from .ratings import (
    AGGREGATION_MODES,
    DEFAULT_GROUP_LABELS,
    DIMENSIONS,
    RatingMatrix,
    aggregate_scores,
    group_samples,
    load_ratings_csv,
    standardize_ratings,
)
from .report import build_evaluation_report, report_to_json
from .semantic import semantic_distance_samples, vectors_from_sidecar_response
from .tails import betainc_reg, f_tail, log_beta, t_tail_two_sided
from .tsne import (
    TsneConfig,
    conditional_affinities,
    init_embedding,
    joint_affinities,
    kl_divergence,
    low_dim_affinities,
    pairwise_sq_distances,
    tsne_gradient,
    tsne_project,
)

__all__ = [
    "AGGREGATION_MODES",
    "AnovaResult",
    "DEFAULT_GROUP_LABELS",
    "DIMENSIONS",
    "PairwiseResult",
    "RatingMatrix",
    "TsneConfig",
    "aggregate_scores",
    "average_ranks",
    "betainc_reg",
    "build_evaluation_report",
    "conditional_affinities",
    "f_tail",
    "format_pairwise_table",
    "group_samples",
    "init_embedding",
    "joint_affinities",
    "kl_divergence",
    "load_ratings_csv",
    "log_beta",
    "low_dim_affinities",
    "moving_average_curve",
    "one_way_anova",
    "pairwise_bonferroni",
    "pairwise_sq_distances",
    "report_to_json",
    "semantic_distance_samples",
    "spearman_rho",
    "standardize_ratings",
    "t_tail_two_sided",
    "tsne_gradient",
    "tsne_project",
    "vectors_from_sidecar_response",
]
