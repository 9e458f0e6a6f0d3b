#!/usr/bin/env python3
"""Semantic layout of hypothesis statements: 2-D projection and distances.

Projects the bundled statement vectors (one per rated hypothesis) to the
plane with the exact heavy-tailed embedding, then compares within-group
semantic spread via pairwise distances and ANOVA.
"""

import os

import numpy as np

from causaforge.embedding import load_embeddings
from causaforge.evalstats import (
    TsneConfig,
    conditional_affinities,
    init_embedding,
    joint_affinities,
    kl_divergence,
    load_ratings_csv,
    one_way_anova,
    semantic_distance_samples,
    tsne_project,
)

DATA = os.path.join(os.path.dirname(__file__), "..", "data")

matrix = load_ratings_csv(os.path.join(DATA, "mini_ratings.csv"))
table = load_embeddings(os.path.join(DATA, "mini_vectors.tsv"))
ids = [h for h, _ in matrix.hypotheses]
points = np.array([table.vectors[h] for h in ids])

config = TsneConfig(perplexity=5.0, iterations=500, seed=7)
p = joint_affinities(conditional_affinities(points, config.perplexity)[0])
coords = tsne_project(points, config)
print(f"KL divergence: {kl_divergence(p, init_embedding(len(ids), config.seed)):.3f} "
      f"(init) -> {kl_divergence(p, coords):.3f} (final)\n")

print("group centroids in the plane:")
for group, members in matrix.groups().items():
    rows = [ids.index(m) for m in members]
    center = coords[rows].mean(axis=0)
    print(f"  {group:15s} ({center[0]:+8.2f}, {center[1]:+8.2f})")

distances = semantic_distance_samples(table.vectors, matrix.groups())
print("\nwithin-group semantic distances:")
for group, values in distances.items():
    print(f"  {group:15s} n={len(values):3d}  mean={np.mean(values):.3f}  sd={np.std(values):.3f}")

anova = one_way_anova(list(distances.values()))
print(f"\ngroup effect on distances: F({anova.df_between},{anova.df_within}) = {anova.f:.2f}, "
      f"p = {anova.p:.3g}, R^2 = {100 * anova.r_squared:.2f}%")
