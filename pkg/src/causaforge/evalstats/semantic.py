"""Within-group semantic spread: pairwise distances between statement vectors."""

from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

from ..errors import DimensionMismatch, InsufficientData, LengthMismatch


def vectors_from_sidecar_response(
    ids: Sequence[str], response: Mapping
) -> dict[str, np.ndarray]:
    """Pair statement ids with an embed-service response, order-aligned.

    The service returns vectors[i] for texts[i]; callers track which id each
    text belonged to.
    """
    vectors = response["vectors"]
    dims = int(response["dims"])
    if len(ids) != len(vectors):
        raise LengthMismatch(f"{len(ids)} ids vs {len(vectors)} vectors")
    out: dict[str, np.ndarray] = {}
    for key, raw in zip(ids, vectors):
        vector = np.asarray(raw, dtype=float)
        if vector.shape != (dims,) or not np.all(np.isfinite(vector)):
            raise DimensionMismatch(f"vector for {key!r} is not {dims} finite floats")
        out[key] = vector
    return out


def semantic_distance_samples(
    vectors: Mapping[str, np.ndarray], groups: Mapping[str, Sequence[str]]
) -> dict[str, list[float]]:
    """Euclidean distances over all unordered within-group pairs.

    A group of n members contributes C(n, 2) samples, in member order, ready
    to feed the ANOVA / pairwise machinery.
    """
    dims = None
    for key, vector in vectors.items():
        vector = np.asarray(vector, dtype=float)
        if dims is None:
            dims = vector.shape
        elif vector.shape != dims:
            raise DimensionMismatch(
                f"vector for {key!r} has shape {vector.shape}, expected {dims}"
            )

    out: dict[str, list[float]] = {}
    for group, members in groups.items():
        if len(members) < 2:
            raise InsufficientData(f"group {group!r} needs >= 2 members")
        missing = [m for m in members if m not in vectors]
        if missing:
            raise KeyError(f"no vectors for {missing} in group {group!r}")
        distances = []
        for i, left in enumerate(members):
            for right in members[i + 1 :]:
                diff = np.asarray(vectors[left], dtype=float) - np.asarray(
                    vectors[right], dtype=float
                )
                distances.append(float(np.linalg.norm(diff)))
        out[group] = distances
    return out
