"""Full evaluation report: every statistic the pipeline publishes, plus the
per-figure CSV tables for external plotting.

The report is a plain dict serialized as stable JSON (sorted keys, fixed
float repr), so identical inputs and seed produce identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict
from typing import Mapping

import numpy as np

from .curves import moving_average_curve
from .inference import one_way_anova, pairwise_bonferroni, spearman_rho
from .ratings import (
    AGGREGATION_MODES,
    RatingMatrix,
    aggregate_scores,
    group_samples,
    standardize_ratings,
)
from .semantic import semantic_distance_samples
from .tsne import TsneConfig, tsne_project


def _csv_text(header: list[str], rows: list[list]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def build_evaluation_report(
    matrix: RatingMatrix,
    vectors: Mapping[str, np.ndarray],
    tsne_config: TsneConfig,
    bonferroni_family: int | None = None,
    curve_window: int = 2,
) -> tuple[dict, dict[str, str]]:
    """Compute all statistics; returns (report dict, {csv name: csv text}).

    CSV tables: "curves" (moving-average score profiles), "tsne" (2-D layout
    with group and mean scores), "distances" (within-group distance samples).
    """
    missing = [h for h, _ in matrix.hypotheses if h not in vectors]
    if missing:
        raise KeyError(f"no statement vectors for hypotheses: {missing[:5]}")

    standardized = standardize_ratings(matrix)
    groups = matrix.groups()

    report: dict = {
        "reviewers": list(matrix.reviewers),
        "group_sizes": {g: len(ids) for g, ids in groups.items()},
        "scores": {},
        "reviewer_agreement": {},
        "semantic_distances": {},
        "tsne": {"perplexity": tsne_config.perplexity, "seed": tsne_config.seed},
    }

    aggregated = {mode: aggregate_scores(standardized, mode) for mode in AGGREGATION_MODES}
    for dimension in matrix.dimensions:
        per_mode: dict = {}
        for mode in AGGREGATION_MODES:
            samples = group_samples(matrix, aggregated[mode][dimension])
            ordered_labels = [g for g in groups if g in samples]
            anova = one_way_anova([samples[g] for g in ordered_labels])
            pairwise = pairwise_bonferroni(
                {g: samples[g] for g in ordered_labels}, family_size=bonferroni_family
            )
            per_mode[mode] = {
                "anova": asdict(anova),
                "pairwise": [asdict(r) for r in pairwise],
            }
        report["scores"][dimension] = per_mode

    for dimension in matrix.dimensions:
        agreements = []
        for i, reviewer_a in enumerate(matrix.reviewers):
            for reviewer_b in matrix.reviewers[i + 1 :]:
                x = [matrix.rating(h, reviewer_a, dimension) for h, _ in matrix.hypotheses]
                y = [matrix.rating(h, reviewer_b, dimension) for h, _ in matrix.hypotheses]
                rho, p = spearman_rho(x, y)
                agreements.append(
                    {"reviewer_a": reviewer_a, "reviewer_b": reviewer_b, "rho": rho, "p": p}
                )
        report["reviewer_agreement"][dimension] = agreements

    distances = semantic_distance_samples(vectors, groups)
    ordered_labels = list(groups)
    distance_anova = one_way_anova([distances[g] for g in ordered_labels])
    distance_pairwise = pairwise_bonferroni(
        {g: distances[g] for g in ordered_labels}, family_size=bonferroni_family
    )
    report["semantic_distances"] = {
        "anova": asdict(distance_anova),
        "pairwise": [asdict(r) for r in distance_pairwise],
        "group_means": {
            g: float(np.mean(distances[g])) for g in ordered_labels
        },
        "sample_counts": {g: len(distances[g]) for g in ordered_labels},
    }

    hyp_ids = [h for h, _ in matrix.hypotheses]
    coords = tsne_project(np.array([np.asarray(vectors[h], dtype=float) for h in hyp_ids]), tsne_config)

    mean_scores = aggregated["mean"]
    curve_rows = []
    for dimension in matrix.dimensions:
        for group in ordered_labels:
            samples = group_samples(matrix, mean_scores[dimension])[group]
            if curve_window <= len(samples):
                curve = moving_average_curve(samples, curve_window)
                curve_rows.extend(
                    [dimension, group, i, repr(v)] for i, v in enumerate(curve)
                )

    tsne_rows = []
    group_of = dict(matrix.hypotheses)
    for row, hyp_id in enumerate(hyp_ids):
        tsne_rows.append(
            [
                hyp_id,
                group_of[hyp_id],
                repr(float(coords[row, 0])),
                repr(float(coords[row, 1])),
            ]
            + [repr(mean_scores[d][hyp_id]) for d in matrix.dimensions]
        )

    distance_rows = [
        [group, i, repr(value)]
        for group in ordered_labels
        for i, value in enumerate(distances[group])
    ]

    tables = {
        "curves": _csv_text(["dimension", "group", "position", "value"], curve_rows),
        "tsne": _csv_text(
            ["hypothesis_id", "group", "x", "y", *matrix.dimensions], tsne_rows
        ),
        "distances": _csv_text(["group", "index", "distance"], distance_rows),
    }
    return report, tables


def report_to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
