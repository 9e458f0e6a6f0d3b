"""Reviewer rating matrices: loading, z-standardization, aggregation.

Raw rating scales differ by reviewer, so all downstream inference runs on
per-reviewer z-scores: each reviewer's ratings for a dimension are centered
and scaled by their own sample statistics across every rated hypothesis.
"""

from __future__ import annotations

import csv
import math
import statistics
from dataclasses import dataclass, replace

from ..errors import CorruptRecord, InsufficientData, IoFailure, ZeroVariance

DIMENSIONS = ("novelty", "usefulness")
DEFAULT_GROUP_LABELS = ("control_human", "control_claude", "pipeline_random", "pipeline_expert")

AGGREGATION_MODES = ("mean", "median", "max")


@dataclass(frozen=True)
class RatingMatrix:
    """Complete (hypothesis x reviewer x dimension) rating block."""

    hypotheses: tuple[tuple[str, str], ...]  # (hypothesis_id, group_label)
    reviewers: tuple[str, ...]
    cells: dict[tuple[str, str, str], float]  # (hypothesis_id, reviewer, dimension)
    dimensions: tuple[str, ...] = DIMENSIONS
    group_labels: tuple[str, ...] = DEFAULT_GROUP_LABELS

    def __post_init__(self) -> None:
        object.__setattr__(self, "hypotheses", tuple(tuple(h) for h in self.hypotheses))
        object.__setattr__(self, "reviewers", tuple(self.reviewers))
        ids = [h for h, _ in self.hypotheses]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate hypothesis ids")
        if not self.reviewers:
            raise ValueError("at least one reviewer required")
        per_group: dict[str, int] = {}
        for _, group in self.hypotheses:
            if group not in self.group_labels:
                raise ValueError(f"group {group!r} not in declared labels {self.group_labels}")
            per_group[group] = per_group.get(group, 0) + 1
        for group, count in per_group.items():
            if count < 2:
                raise ValueError(f"group {group!r} has fewer than 2 hypotheses")
        for hyp_id, _ in self.hypotheses:
            for reviewer in self.reviewers:
                for dimension in self.dimensions:
                    if (hyp_id, reviewer, dimension) not in self.cells:
                        raise ValueError(
                            f"missing cell ({hyp_id!r}, {reviewer!r}, {dimension!r})"
                        )

    def rating(self, hyp_id: str, reviewer: str, dimension: str) -> float:
        return self.cells[(hyp_id, reviewer, dimension)]

    def groups(self) -> dict[str, list[str]]:
        """Group label -> hypothesis ids, in declaration order."""
        out: dict[str, list[str]] = {}
        for hyp_id, group in self.hypotheses:
            out.setdefault(group, []).append(hyp_id)
        return out


def load_ratings_csv(path: str, group_labels: tuple[str, ...] | None = None) -> RatingMatrix:
    """Read the hypothesis_id,group,reviewer,dimension,rating CSV layout."""
    try:
        with open(path, "r", encoding="utf-8", newline="") as handle:
            rows = list(csv.DictReader(handle))
    except OSError as exc:
        raise IoFailure(f"cannot read ratings {path}: {exc}") from exc
    if not rows:
        raise CorruptRecord(1, "ratings file has no data rows")

    cells: dict[tuple[str, str, str], float] = {}
    hypotheses: list[tuple[str, str]] = []
    seen_ids: set[str] = set()
    reviewers: list[str] = []
    dimensions: list[str] = []
    for line_no, row in enumerate(rows, start=2):
        try:
            hyp_id = row["hypothesis_id"]
            group = row["group"]
            reviewer = row["reviewer"]
            dimension = row["dimension"]
            rating = float(row["rating"])
        except (KeyError, TypeError, ValueError) as exc:
            raise CorruptRecord(line_no, f"bad ratings row: {exc}") from exc
        if hyp_id not in seen_ids:
            seen_ids.add(hyp_id)
            hypotheses.append((hyp_id, group))
        if reviewer not in reviewers:
            reviewers.append(reviewer)
        if dimension not in dimensions:
            dimensions.append(dimension)
        cells[(hyp_id, reviewer, dimension)] = rating

    labels = group_labels or tuple(sorted({g for _, g in hypotheses}))
    return RatingMatrix(
        hypotheses=tuple(hypotheses),
        reviewers=tuple(reviewers),
        cells=cells,
        dimensions=tuple(dimensions),
        group_labels=labels,
    )


def standardize_ratings(matrix: RatingMatrix) -> RatingMatrix:
    """Per reviewer, per dimension: z = (x - mean) / sample sd over all hypotheses."""
    cells: dict[tuple[str, str, str], float] = {}
    for reviewer in matrix.reviewers:
        for dimension in matrix.dimensions:
            values = [
                matrix.rating(hyp_id, reviewer, dimension) for hyp_id, _ in matrix.hypotheses
            ]
            if len(values) < 2:
                raise InsufficientData("need at least 2 hypotheses to standardize")
            mean = math.fsum(values) / len(values)
            variance = math.fsum((v - mean) ** 2 for v in values) / (len(values) - 1)
            if variance == 0.0:
                raise ZeroVariance(reviewer, dimension)
            sd = math.sqrt(variance)
            for hyp_id, _ in matrix.hypotheses:
                cells[(hyp_id, reviewer, dimension)] = (
                    matrix.rating(hyp_id, reviewer, dimension) - mean
                ) / sd
    return replace(matrix, cells=cells)


def aggregate_scores(matrix: RatingMatrix, mode: str) -> dict[str, dict[str, float]]:
    """Collapse reviewers per hypothesis: dimension -> hypothesis_id -> score.

    The median of an even reviewer count is the midpoint of the middle pair.
    """
    if mode not in AGGREGATION_MODES:
        raise ValueError(f"mode must be one of {AGGREGATION_MODES}")
    out: dict[str, dict[str, float]] = {}
    for dimension in matrix.dimensions:
        scores: dict[str, float] = {}
        for hyp_id, _ in matrix.hypotheses:
            values = [matrix.rating(hyp_id, reviewer, dimension) for reviewer in matrix.reviewers]
            if mode == "mean":
                scores[hyp_id] = math.fsum(values) / len(values)
            elif mode == "median":
                scores[hyp_id] = float(statistics.median(values))
            else:
                scores[hyp_id] = max(values)
        out[dimension] = scores
    return out


def group_samples(
    matrix: RatingMatrix, scores: dict[str, float]
) -> dict[str, list[float]]:
    """Arrange per-hypothesis scores into per-group sample lists."""
    samples: dict[str, list[float]] = {}
    for hyp_id, group in matrix.hypotheses:
        samples.setdefault(group, []).append(scores[hyp_id])
    return samples
