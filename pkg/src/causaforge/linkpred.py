"""Link prediction over the causal graph.

Unconnected concept pairs pass a cosine-similarity gate on their embeddings,
get scored by the Jaccard similarity of their undirected neighborhoods, and
are ranked by that score (cosine, then lexicographic order, break ties).
Enumeration is normally anchored to a focus set, because the all-pairs scan
is quadratic in nodes and only sensible on desk-scale graphs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

from .embedding import EmbeddingTable, cosine_similarity
from .errors import CorruptRecord, IoFailure, MissingEmbedding, UnknownConcept
from .graph import CausalGraph, Direction
from .ioutil import atomic_write_text, canonical_json


@dataclass(frozen=True)
class CandidatePair:
    """An unconnected pair, ordered so that a < b lexicographically."""

    a: str
    b: str
    cosine: float
    jaccard: float | None = None

    def __post_init__(self) -> None:
        if not self.a < self.b:
            raise ValueError("pair must satisfy a < b")
        if self.jaccard is not None and not 0.0 <= self.jaccard <= 1.0:
            raise ValueError(f"jaccard out of range: {self.jaccard}")


def jaccard_score(graph: CausalGraph, a: str, b: str) -> float:
    """|N(a) & N(b)| / |N(a) | N(b)| over undirected neighborhoods.

    The endpoints themselves are excluded from both sets; an empty union
    scores 0.
    """
    if not graph.has_node(a):
        raise UnknownConcept(a)
    if not graph.has_node(b):
        raise UnknownConcept(b)
    neighbors_a = graph.neighbor_set(a, Direction.UNDIRECTED) - {a, b}
    neighbors_b = graph.neighbor_set(b, Direction.UNDIRECTED) - {a, b}
    union = neighbors_a | neighbors_b
    if not union:
        return 0.0
    return len(neighbors_a & neighbors_b) / len(union)


def _gate(graph: CausalGraph, table: EmbeddingTable, a: str, b: str, threshold: float) -> CandidatePair | None:
    if graph.has_connection(a, b):
        return None
    for concept in (a, b):
        if concept not in table:
            raise MissingEmbedding(concept)
    cosine = cosine_similarity(table[a], table[b])
    if cosine < threshold:
        return None
    return CandidatePair(a=a, b=b, cosine=cosine)


def enumerate_candidates(
    graph: CausalGraph,
    table: EmbeddingTable,
    threshold: float,
    focus: set[str] | None = None,
) -> list[CandidatePair]:
    """Unconnected pairs whose embedding cosine clears the threshold.

    With a focus set, only pairs touching the focus are considered; without
    one, every node pair is scanned (O(V^2)). Output is ordered by (a, b);
    jaccard is left unscored.
    """
    if not -1.0 <= threshold <= 1.0:
        raise ValueError("threshold must lie in [-1, 1]")
    nodes = graph.node_ids()
    pairs: list[CandidatePair] = []
    if focus is not None:
        for concept in sorted(focus):
            if not graph.has_node(concept):
                raise UnknownConcept(concept)
        seen: set[tuple[str, str]] = set()
        for anchor in sorted(focus):
            for other in nodes:
                if other == anchor:
                    continue
                key = (min(anchor, other), max(anchor, other))
                if key in seen:
                    continue
                seen.add(key)
                candidate = _gate(graph, table, key[0], key[1], threshold)
                if candidate:
                    pairs.append(candidate)
        pairs.sort(key=lambda p: (p.a, p.b))
        return pairs
    for i, a in enumerate(nodes):
        for b in nodes[i + 1 :]:
            candidate = _gate(graph, table, a, b, threshold)
            if candidate:
                pairs.append(candidate)
    return pairs


def score_candidates(graph: CausalGraph, pairs: list[CandidatePair]) -> list[CandidatePair]:
    """Fill in the Jaccard score of every candidate."""
    return [replace(p, jaccard=jaccard_score(graph, p.a, p.b)) for p in pairs]


def rank_candidates(pairs: list[CandidatePair], k: int) -> list[CandidatePair]:
    """First k pairs by jaccard desc, cosine desc, then (a, b)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    for pair in pairs:
        if pair.jaccard is None:
            raise ValueError(f"pair ({pair.a}, {pair.b}) is unscored")
    return sorted(pairs, key=lambda p: (-p.jaccard, -p.cosine, p.a, p.b))[:k]


def shared_neighbors(graph: CausalGraph, a: str, b: str) -> list[str]:
    """Common undirected neighbors of a and b, sorted, endpoints excluded."""
    common = (
        graph.neighbor_set(a, Direction.UNDIRECTED)
        & graph.neighbor_set(b, Direction.UNDIRECTED)
    ) - {a, b}
    return sorted(common)


def predict_links(
    graph: CausalGraph,
    table: EmbeddingTable,
    threshold: float,
    top_k: int,
    focus: set[str] | None = None,
) -> list[CandidatePair]:
    """enumerate -> score -> rank, the whole stage in one call."""
    candidates = enumerate_candidates(graph, table, threshold, focus)
    return rank_candidates(score_candidates(graph, candidates), top_k)


# --- artifact IO ------------------------------------------------------------


def save_candidates(pairs: list[CandidatePair], path: str) -> None:
    lines = [
        canonical_json({"a": p.a, "b": p.b, "cosine": p.cosine, "jaccard": p.jaccard})
        for p in pairs
    ]
    atomic_write_text(path, "\n".join(lines) + ("\n" if lines else ""))


def load_candidates(path: str) -> list[CandidatePair]:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as exc:
        raise IoFailure(f"cannot read candidates {path}: {exc}") from exc
    pairs = []
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
            pairs.append(
                CandidatePair(a=raw["a"], b=raw["b"], cosine=raw["cosine"], jaccard=raw["jaccard"])
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise CorruptRecord(line_no, f"bad candidate record: {exc}") from exc
    return pairs
