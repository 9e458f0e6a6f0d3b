"""Concept embeddings via biased random walks and skip-gram training.

Walks follow the second-order scheme with return parameter p and in-out
parameter q: stepping from `prev` through `cur`, a candidate next node x is
weighted 1/p when x == prev, 1 when x neighbors prev, and 1/q otherwise,
normalized per step. Walks run over the undirected neighbor view by default
so cause and effect concepts co-embed; a config flag switches to out-edges
only.

Training is skip-gram with negative sampling (SGNS). For a center c with
context o and negatives n_k drawn from the unigram distribution raised to
3/4, the per-pair objective is

    loss = -log s(u_o . v_c) - sum_k log s(-u_nk . v_c),     s = sigmoid,

minimized by SGD whose learning rate decays linearly to 1e-4 of its initial
value. Everything is seeded: each walk has its own RNG stream derived from
(seed, stable hash of the start node, round), so the walk set is reproducible
regardless of how generation is scheduled, and training consumes a single
seeded stream.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CorruptRecord, DegenerateCorpus, IoFailure, ZeroVector
from .graph import CausalGraph, Direction
from .ioutil import atomic_write_text

EMBEDDINGS_FORMAT_TAG = "causaforge-embeddings v1"


@dataclass(frozen=True)
class EmbeddingConfig:
    dims: int = 128
    walk_length: int = 80
    walks_per_node: int = 10
    return_param_p: float = 1.0
    inout_param_q: float = 1.0
    window: int = 10
    negatives_per_positive: int = 5
    epochs: int = 5
    initial_learning_rate: float = 0.025
    seed: int = 0
    directed: bool = False

    def __post_init__(self) -> None:
        counts = (
            self.dims,
            self.walk_length,
            self.walks_per_node,
            self.window,
            self.negatives_per_positive,
            self.epochs,
        )
        if any(c < 1 for c in counts):
            raise ValueError("all counts must be >= 1")
        if self.return_param_p <= 0 or self.inout_param_q <= 0:
            raise ValueError("p and q must be positive")
        if self.initial_learning_rate <= 0:
            raise ValueError("learning rate must be positive")


@dataclass(eq=False)
class EmbeddingTable:
    vectors: dict[str, np.ndarray]
    dims: int
    epoch_losses: list[float] = field(default_factory=list)

    def __post_init__(self) -> None:
        for concept, vector in self.vectors.items():
            if vector.shape != (self.dims,) or not np.all(np.isfinite(vector)):
                raise ValueError(f"bad vector for {concept!r}")

    def __contains__(self, concept: str) -> bool:
        return concept in self.vectors

    def __getitem__(self, concept: str) -> np.ndarray:
        return self.vectors[concept]


def _stable_node_hash(node_id: str) -> int:
    return int.from_bytes(hashlib.blake2b(node_id.encode("utf-8"), digest_size=8).digest(), "big")


def _neighbor_view(graph: CausalGraph, directed: bool) -> tuple[dict[str, list[str]], dict[str, set[str]]]:
    direction = Direction.OUT if directed else Direction.UNDIRECTED
    adj_sets = {v: graph.neighbor_set(v, direction) for v in graph.node_ids()}
    adj_lists = {v: sorted(s) for v, s in adj_sets.items()}
    return adj_lists, adj_sets


def _pick(rng: np.random.Generator, cumulative: np.ndarray) -> int:
    index = int(np.searchsorted(cumulative, rng.random(), side="right"))
    return min(index, len(cumulative) - 1)


def _walk(
    adj_lists: dict[str, list[str]],
    adj_sets: dict[str, set[str]],
    start: str,
    length: int,
    p: float,
    q: float,
    rng: np.random.Generator,
) -> list[str]:
    walk = [start]
    while len(walk) < length:
        cur = walk[-1]
        neighbors = adj_lists[cur]
        if not neighbors:
            break
        if len(walk) == 1:
            nxt = neighbors[_pick(rng, np.cumsum(np.full(len(neighbors), 1.0 / len(neighbors))))]
        else:
            prev = walk[-2]
            prev_set = adj_sets[prev]
            weights = np.empty(len(neighbors))
            for i, candidate in enumerate(neighbors):
                if candidate == prev:
                    weights[i] = 1.0 / p
                elif candidate in prev_set:
                    weights[i] = 1.0
                else:
                    weights[i] = 1.0 / q
            cumulative = np.cumsum(weights / weights.sum())
            nxt = neighbors[_pick(rng, cumulative)]
        walk.append(nxt)
    return walk


def walk_rng(seed: int, node_id: str, round_index: int) -> np.random.Generator:
    """The per-walk RNG stream: independent of scheduling, fixed by identity."""
    return np.random.default_rng([seed & 0xFFFFFFFFFFFFFFFF, _stable_node_hash(node_id), round_index])


def single_walk(
    graph: CausalGraph, start: str, config: EmbeddingConfig, rng: np.random.Generator
) -> list[str]:
    """One biased walk from `start` driven by an explicit RNG (mainly for tests)."""
    adj_lists, adj_sets = _neighbor_view(graph, config.directed)
    return _walk(
        adj_lists, adj_sets, start, config.walk_length, config.return_param_p, config.inout_param_q, rng
    )


def generate_walks(
    graph: CausalGraph, config: EmbeddingConfig, seed: int | None = None
) -> list[list[str]]:
    """walks_per_node biased walks from every node, deterministic given the seed."""
    if graph.node_count == 0:
        raise ValueError("cannot walk an empty graph")
    seed = config.seed if seed is None else seed
    adj_lists, adj_sets = _neighbor_view(graph, config.directed)
    nodes = graph.node_ids()
    walks = []
    for round_index in range(config.walks_per_node):
        for node in nodes:
            rng = walk_rng(seed, node, round_index)
            walks.append(
                _walk(
                    adj_lists,
                    adj_sets,
                    node,
                    config.walk_length,
                    config.return_param_p,
                    config.inout_param_q,
                    rng,
                )
            )
    return walks


def sgns_pair_objective(
    center_vec: np.ndarray, output_vecs: np.ndarray, labels: np.ndarray
) -> tuple[float, np.ndarray, np.ndarray]:
    """Loss and analytic gradients for one (center, context+negatives) pair.

    `output_vecs` stacks the context row (label 1) and negative rows (label 0).
    Returns (loss, grad wrt center_vec, grad wrt output_vecs).
    """
    scores = output_vecs @ center_vec
    sig = 1.0 / (1.0 + np.exp(-scores))
    eps = 1e-12
    loss = -float(
        np.sum(labels * np.log(np.maximum(sig, eps)) + (1 - labels) * np.log(np.maximum(1 - sig, eps)))
    )
    residual = sig - labels
    grad_center = residual @ output_vecs
    grad_outputs = residual[:, None] * center_vec[None, :]
    return loss, grad_center, grad_outputs


def _count_pairs(walks: list[list[str]], window: int) -> int:
    total = 0
    for walk in walks:
        length = len(walk)
        for i in range(length):
            total += min(i + window, length - 1) - max(i - window, 0)
    return total


def train_embeddings(walks: list[list[str]], config: EmbeddingConfig) -> EmbeddingTable:
    """SGNS over the walk corpus; returns the input-side vectors per concept."""
    if not walks:
        raise DegenerateCorpus("no walks to train on")
    vocab = sorted({node for walk in walks for node in walk})
    index = {node: i for i, node in enumerate(vocab)}
    n = len(vocab)

    counts = np.zeros(n)
    for walk in walks:
        for node in walk:
            counts[index[node]] += 1
    noise = counts**0.75
    noise_cumulative = np.cumsum(noise / noise.sum())

    pairs_per_epoch = _count_pairs(walks, config.window)
    if pairs_per_epoch == 0:
        raise DegenerateCorpus("walk corpus yields zero training pairs")
    total_updates = pairs_per_epoch * config.epochs

    rng = np.random.default_rng([config.seed & 0xFFFFFFFFFFFFFFFF, 0x5EED])
    input_vecs = (rng.random((n, config.dims)) - 0.5) / config.dims
    output_vecs = np.zeros((n, config.dims))

    lr_start = config.initial_learning_rate
    lr_end = lr_start * 1e-4
    negatives = config.negatives_per_positive
    labels = np.zeros(negatives + 1)
    labels[0] = 1.0

    epoch_losses = []
    update = 0
    for _ in range(config.epochs):
        epoch_loss = 0.0
        for walk in walks:
            ids = [index[node] for node in walk]
            length = len(ids)
            for i in range(length):
                center = ids[i]
                lo = max(0, i - config.window)
                hi = min(length, i + config.window + 1)
                for j in range(lo, hi):
                    if j == i:
                        continue
                    context = ids[j]
                    draws = rng.random(negatives)
                    neg_ids = np.minimum(
                        np.searchsorted(noise_cumulative, draws, side="right"), n - 1
                    )
                    rows = np.concatenate(([context], neg_ids))
                    lr = lr_start + (lr_end - lr_start) * (update / max(1, total_updates - 1))
                    loss, grad_center, grad_rows = sgns_pair_objective(
                        input_vecs[center], output_vecs[rows], labels
                    )
                    np.add.at(output_vecs, rows, -lr * grad_rows)
                    input_vecs[center] -= lr * grad_center
                    epoch_loss += loss
                    update += 1
        epoch_losses.append(epoch_loss / pairs_per_epoch)

    vectors = {node: input_vecs[index[node]].copy() for node in vocab}
    return EmbeddingTable(vectors=vectors, dims=config.dims, epoch_losses=epoch_losses)


def cosine_similarity(u: np.ndarray, v: np.ndarray) -> float:
    """u.v / (|u||v|), clamped into [-1, 1] against rounding spill.

    The denominator is sqrt(|u|^2 * |v|^2) in one rounding step, so parallel
    and antiparallel vectors land on exactly +/-1.0.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    norm_sq_u = float(np.dot(u, u))
    norm_sq_v = float(np.dot(v, v))
    if norm_sq_u == 0.0 or norm_sq_v == 0.0:
        raise ZeroVector("cosine similarity of a zero vector is undefined")
    numerator = float(np.dot(u, v))
    denominator = math.sqrt(norm_sq_u * norm_sq_v)
    if denominator == 0.0 or not math.isfinite(denominator):
        # Extreme magnitudes under- or overflowed; retry on rescaled copies.
        u = u / float(np.max(np.abs(u)))
        v = v / float(np.max(np.abs(v)))
        numerator = float(np.dot(u, v))
        denominator = math.sqrt(float(np.dot(u, u)) * float(np.dot(v, v)))
    value = numerator / denominator
    return max(-1.0, min(1.0, value))


# --- persistence -----------------------------------------------------------


def save_embeddings(table: EmbeddingTable, path: str) -> None:
    lines = [f"{EMBEDDINGS_FORMAT_TAG}\t{table.dims}\t{len(table.vectors)}"]
    for concept in sorted(table.vectors):
        values = " ".join(repr(float(x)) for x in table.vectors[concept])
        lines.append(f"{concept}\t{values}")
    atomic_write_text(path, "\n".join(lines) + "\n")


def load_embeddings(path: str) -> EmbeddingTable:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            lines = [line.rstrip("\n") for line in handle]
    except OSError as exc:
        raise IoFailure(f"cannot read embeddings {path}: {exc}") from exc
    lines = [line for line in lines if line]
    if not lines:
        raise CorruptRecord(1, "empty embeddings file")
    header = lines[0].split("\t")
    if len(header) != 3 or header[0] != EMBEDDINGS_FORMAT_TAG:
        raise CorruptRecord(1, f"unsupported embeddings header {lines[0]!r}")
    try:
        dims, count = int(header[1]), int(header[2])
    except ValueError as exc:
        raise CorruptRecord(1, f"bad header numbers: {exc}") from exc
    if len(lines) - 1 != count:
        raise CorruptRecord(1, f"expected {count} vectors, found {len(lines) - 1}")
    vectors = {}
    for line_no, line in enumerate(lines[1:], start=2):
        parts = line.split("\t")
        if len(parts) != 2:
            raise CorruptRecord(line_no, "expected 'id<TAB>floats'")
        concept, payload = parts
        try:
            vector = np.array([float(x) for x in payload.split()], dtype=float)
        except ValueError as exc:
            raise CorruptRecord(line_no, f"bad float: {exc}") from exc
        if vector.shape != (dims,) or not np.all(np.isfinite(vector)):
            raise CorruptRecord(line_no, f"vector for {concept!r} is not {dims} finite floats")
        vectors[concept] = vector
    return EmbeddingTable(vectors=vectors, dims=dims)


def mean_pairwise_cosine(table: EmbeddingTable, concepts: list[str]) -> float:
    """Average cosine over all unordered pairs drawn from `concepts`."""
    pairs = [
        cosine_similarity(table[a], table[b])
        for i, a in enumerate(concepts)
        for b in concepts[i + 1 :]
    ]
    if not pairs:
        raise ValueError("need at least two concepts")
    return float(np.mean(pairs))


def mean_cross_cosine(table: EmbeddingTable, left: list[str], right: list[str]) -> float:
    """Average cosine over all pairs with one concept from each list."""
    pairs = [cosine_similarity(table[a], table[b]) for a in left for b in right]
    if not pairs:
        raise ValueError("both lists must be non-empty")
    return float(np.mean(pairs))
