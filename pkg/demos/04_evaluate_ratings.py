#!/usr/bin/env python3
"""Evaluation statistics over a reviewer rating block.

Loads the bundled synthetic ratings (four groups, three reviewers, two
dimensions), standardizes per reviewer, and runs the full inference stack:
ANOVA with explained variance, Bonferroni-corrected pairwise contrasts,
reviewer agreement, and the descending moving-average score curves.
"""

import os

from causaforge.evalstats import (
    aggregate_scores,
    format_pairwise_table,
    group_samples,
    load_ratings_csv,
    moving_average_curve,
    one_way_anova,
    pairwise_bonferroni,
    spearman_rho,
    standardize_ratings,
)

DATA = os.path.join(os.path.dirname(__file__), "..", "data")

matrix = load_ratings_csv(os.path.join(DATA, "mini_ratings.csv"))
print(f"{len(matrix.hypotheses)} hypotheses, reviewers {matrix.reviewers}, "
      f"groups {sorted(matrix.groups())}\n")

standardized = standardize_ratings(matrix)

for mode in ("mean", "median", "max"):
    scores = aggregate_scores(standardized, mode)["novelty"]
    samples = group_samples(matrix, scores)
    anova = one_way_anova(list(samples.values()))
    print(f"novelty, {mode} of reviewer z-scores: "
          f"F({anova.df_between},{anova.df_within}) = {anova.f:.2f}, "
          f"p = {anova.p:.4g}, R^2 = {100 * anova.r_squared:.2f}%")

print("\npairwise contrasts (novelty, mean z):")
scores = aggregate_scores(standardized, "mean")["novelty"]
print(format_pairwise_table(pairwise_bonferroni(group_samples(matrix, scores))))

print("\nreviewer agreement (novelty, Spearman):")
for i, left in enumerate(matrix.reviewers):
    for right in matrix.reviewers[i + 1:]:
        x = [matrix.rating(h, left, "novelty") for h, _ in matrix.hypotheses]
        y = [matrix.rating(h, right, "novelty") for h, _ in matrix.hypotheses]
        rho, p = spearman_rho(x, y)
        print(f"  {left} vs {right}: rho = {rho:+.3f} (p = {p:.4g})")

print("\ndescending novelty curve per group (moving average, window 2):")
for group, values in group_samples(matrix, scores).items():
    curve = moving_average_curve(values, window=2)
    print(f"  {group:15s} {[round(v, 2) for v in curve]}")
