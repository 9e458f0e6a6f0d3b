"""Deterministic stand-in for the sentence-embedding sidecar.

Each text maps to a unit vector derived purely from SHA-256 digests of
(seed, text), expanded block by block:

    block_k = SHA256( seed as 8 big-endian bytes || SHA256(text) || k as 4 big-endian bytes )

Big-endian 32-bit words from the blocks become components via
u / 2^32 * 2 - 1, then the vector is L2-normalized. Every arithmetic step is
exact or correctly rounded in IEEE-754 double precision, so any runtime that
follows the recipe (the TypeScript sidecar does) produces bit-identical
vectors. That is what lets a checksum fixture pin the scheme across
platforms.
"""

from __future__ import annotations

import hashlib
import math
import struct
from typing import Iterable, Mapping

from .embedding import EmbeddingTable, save_embeddings

MOCK_DIMS = 64
MOCK_MODEL_TAG = "mock-sha256-meanfree-v1"


def mock_vector(text: str, seed: int = 0, dims: int = MOCK_DIMS) -> list[float]:
    """Unit-normalized pseudo-random vector, a pure function of (seed, text)."""
    if dims < 1:
        raise ValueError("dims must be >= 1")
    text_hash = hashlib.sha256(text.encode("utf-8")).digest()
    seed_bytes = (seed & 0xFFFFFFFFFFFFFFFF).to_bytes(8, "big")
    words_needed = dims
    words: list[int] = []
    block = 0
    while len(words) < words_needed:
        digest = hashlib.sha256(seed_bytes + text_hash + block.to_bytes(4, "big")).digest()
        words.extend(int.from_bytes(digest[i : i + 4], "big") for i in range(0, 32, 4))
        block += 1
    components = [w / 4294967296.0 * 2.0 - 1.0 for w in words[:dims]]
    norm_sq = 0.0
    for value in components:
        norm_sq += value * value
    if norm_sq == 0.0:
        components[0] = 1.0
        norm_sq = 1.0
    norm = math.sqrt(norm_sq)
    return [value / norm for value in components]


def mock_embedding_table(
    statements: Mapping[str, str], seed: int = 0, dims: int = MOCK_DIMS
) -> EmbeddingTable:
    """One mock vector per (id -> text) entry, as an embedding table."""
    import numpy as np

    vectors = {
        key: np.array(mock_vector(text, seed=seed, dims=dims), dtype=float)
        for key, text in statements.items()
    }
    return EmbeddingTable(vectors=vectors, dims=dims)


def write_mock_vectors(
    statements: Mapping[str, str], path: str, seed: int = 0, dims: int = MOCK_DIMS
) -> None:
    save_embeddings(mock_embedding_table(statements, seed=seed, dims=dims), path)


def vectors_checksum(vectors: Iterable[Iterable[float]]) -> str:
    """SHA-256 over the raw little-endian float64 bytes of all components."""
    digest = hashlib.sha256()
    for vector in vectors:
        for component in vector:
            digest.update(struct.pack("<d", component))
    return digest.hexdigest()
