"""Exact t-SNE for projecting statement vectors to 2-D.

This is the O(n^2) algorithm, not an approximation: per-point Gaussian
bandwidths are found by bisection until each conditional distribution's
perplexity (2 ** Shannon entropy, bits) is within a tolerance of the target;
the symmetrized input affinities P are matched against Student-t output
affinities Q by gradient descent with momentum and early exaggeration.

The cost is KL(P || Q) and its exact gradient for point i is

    4 * sum_j (p_ij - q_ij) * (1 + |y_i - y_j|^2)^-1 * (y_i - y_j).

All randomness flows from the config seed, so a projection is reproducible
bit-for-bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import PerplexityTooLarge

_PERPLEXITY_TOL = 1e-3
_Q_FLOOR = 1e-12


@dataclass(frozen=True)
class TsneConfig:
    perplexity: float = 10.0
    iterations: int = 1000
    learning_rate: float = 100.0
    momentum_initial: float = 0.5
    momentum_final: float = 0.8
    momentum_switch_iteration: int = 250
    early_exaggeration: float = 12.0
    exaggeration_iterations: int = 250
    seed: int = 0

    def __post_init__(self) -> None:
        if self.perplexity <= 0:
            raise ValueError("perplexity must be positive")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning rate must be positive")


def pairwise_sq_distances(points: np.ndarray) -> np.ndarray:
    sq_norms = np.sum(points**2, axis=1)
    distances = sq_norms[:, None] - 2.0 * (points @ points.T) + sq_norms[None, :]
    np.fill_diagonal(distances, 0.0)
    return np.maximum(distances, 0.0)


def _row_affinity(sq_dist_row: np.ndarray, beta: float) -> tuple[np.ndarray, float]:
    """Conditional distribution for one point and its perplexity (bits base)."""
    weights = np.exp(-sq_dist_row * beta)
    total = weights.sum()
    if total <= 0.0:
        probabilities = np.full_like(weights, 1.0 / len(weights))
    else:
        probabilities = weights / total
    positive = probabilities[probabilities > 0]
    entropy_bits = float(-np.sum(positive * np.log2(positive)))
    return probabilities, 2.0**entropy_bits


def conditional_affinities(
    points: np.ndarray, perplexity: float, tol: float = _PERPLEXITY_TOL
) -> tuple[np.ndarray, np.ndarray]:
    """Per-point Gaussian affinities with bandwidths bisected to the target.

    Returns (P_conditional, betas) where betas[i] = 1 / (2 sigma_i^2) and row i
    of P_conditional is p_{j|i} with a zero diagonal.
    """
    points = np.asarray(points, dtype=float)
    n = points.shape[0]
    if n < 4:
        raise ValueError("need at least 4 points")
    if perplexity >= (n - 1) / 3.0:
        raise PerplexityTooLarge(
            f"perplexity {perplexity} must be below (n - 1) / 3 = {(n - 1) / 3.0:.3f}"
        )
    sq_distances = pairwise_sq_distances(points)
    conditional = np.zeros((n, n))
    betas = np.ones(n)
    for i in range(n):
        row = np.delete(sq_distances[i], i)
        beta, beta_low, beta_high = 1.0, 0.0, np.inf
        probabilities, achieved = _row_affinity(row, beta)
        for _ in range(10_000):
            if abs(achieved - perplexity) <= tol:
                break
            if achieved > perplexity:  # too flat: tighten the kernel
                beta_low = beta
                beta = beta * 2.0 if np.isinf(beta_high) else (beta + beta_high) / 2.0
            else:
                beta_high = beta
                beta = beta / 2.0 if beta_low == 0.0 else (beta + beta_low) / 2.0
            probabilities, achieved = _row_affinity(row, beta)
        conditional[i, :i] = probabilities[:i]
        conditional[i, i + 1 :] = probabilities[i:]
        betas[i] = beta
    return conditional, betas


def joint_affinities(conditional: np.ndarray) -> np.ndarray:
    """Symmetrized joint P: (P + P^T) / 2n. Sums to 1, zero diagonal."""
    n = conditional.shape[0]
    return (conditional + conditional.T) / (2.0 * n)


def low_dim_affinities(embedding: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Student-t (1 dof) affinities Q and the unnormalized kernel matrix."""
    kernel = 1.0 / (1.0 + pairwise_sq_distances(embedding))
    np.fill_diagonal(kernel, 0.0)
    return kernel / kernel.sum(), kernel


def kl_divergence(p: np.ndarray, embedding: np.ndarray) -> float:
    """KL(P || Q(embedding)) over the off-diagonal support of P."""
    q, _ = low_dim_affinities(embedding)
    mask = p > 0
    return float(np.sum(p[mask] * np.log(p[mask] / np.maximum(q[mask], _Q_FLOOR))))


def tsne_gradient(p: np.ndarray, embedding: np.ndarray) -> np.ndarray:
    """Exact KL gradient with respect to the embedding coordinates."""
    q, kernel = low_dim_affinities(embedding)
    weights = (p - q) * kernel
    return 4.0 * (weights.sum(axis=1)[:, None] * embedding - weights @ embedding)


def init_embedding(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng([seed & 0xFFFFFFFFFFFFFFFF, 0x7513])
    return rng.normal(0.0, 1e-4, size=(n, 2))


def tsne_project(vectors, config: TsneConfig) -> np.ndarray:
    """Project high-dimensional rows to 2-D coordinates.

    Deterministic given config.seed; the initial layout is
    init_embedding(n, config.seed).
    """
    points = np.asarray(vectors, dtype=float)
    conditional, _ = conditional_affinities(points, config.perplexity)
    p = joint_affinities(conditional)

    embedding = init_embedding(points.shape[0], config.seed)
    velocity = np.zeros_like(embedding)
    for iteration in range(config.iterations):
        p_effective = (
            p * config.early_exaggeration
            if iteration < config.exaggeration_iterations
            else p
        )
        gradient = tsne_gradient(p_effective, embedding)
        momentum = (
            config.momentum_initial
            if iteration < config.momentum_switch_iteration
            else config.momentum_final
        )
        velocity = momentum * velocity - config.learning_rate * gradient
        embedding = embedding + velocity
        embedding = embedding - embedding.mean(axis=0)
    return embedding
