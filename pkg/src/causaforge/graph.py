"""Persistent directed causal concept graph.

Edges are keyed by (cause, effect, relationship) and merged on insert:
re-asserting a pair bumps its support count, extends its provenance, and
re-tallies its polarity (majority wins, deterministically). Correlation edges
are stored once but behave bidirectionally for every neighborhood and degree
query, so an undirected association contributes an arc each way.

The on-disk format is canonical JSON Lines: a versioned header, node lines
sorted by id, then edge lines sorted by key. Equal graphs always serialize to
identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

from .errors import CorruptRecord, InvariantViolation, IoFailure, UnknownConcept
from .extraction import CausalAssertion, Polarity, Relationship, normalize_concept
from .ioutil import atomic_write_text, canonical_json

FORMAT_TAG = "causaforge-graph v1"

_POLARITY_PRIORITY = (Polarity.POSITIVE, Polarity.NEGATIVE, Polarity.NONE)


class Direction(str, Enum):
    IN = "in"
    OUT = "out"
    UNDIRECTED = "undirected"


@dataclass(frozen=True)
class ConceptNode:
    id: str
    display_label: str

    def __post_init__(self) -> None:
        if self.id != normalize_concept(self.id):
            raise ValueError(f"node id is not normalized: {self.id!r}")


@dataclass
class CausalEdge:
    cause: str
    effect: str
    relationship: Relationship
    polarity: Polarity
    support_count: int
    source_docs: set[str]
    polarity_counts: dict[Polarity, int] = field(default_factory=dict)

    @property
    def key(self) -> tuple[str, str, Relationship]:
        return (self.cause, self.effect, self.relationship)


def _majority_polarity(counts: dict[Polarity, int]) -> Polarity:
    best = max(counts.values())
    for candidate in _POLARITY_PRIORITY:
        if counts.get(candidate, 0) == best:
            return candidate
    raise AssertionError("empty polarity tally")


class CausalGraph:
    """In-memory graph with adjacency indexes in both directions."""

    def __init__(self) -> None:
        self._nodes: dict[str, ConceptNode] = {}
        self._edges: dict[tuple[str, str, Relationship], CausalEdge] = {}
        self._out: dict[str, set[str]] = {}
        self._in: dict[str, set[str]] = {}
        self._in_degree: dict[str, int] = {}
        self._out_degree: dict[str, int] = {}

    # --- introspection ----------------------------------------------------

    @property
    def node_count(self) -> int:
        return len(self._nodes)

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    @property
    def arc_count(self) -> int:
        """Directed arcs implied by the edges; correlations count both ways."""
        return sum(
            2 if e.relationship is Relationship.CORRELATION else 1 for e in self._edges.values()
        )

    def node_ids(self) -> list[str]:
        return sorted(self._nodes)

    def nodes(self) -> list[ConceptNode]:
        return [self._nodes[i] for i in self.node_ids()]

    def edges(self) -> list[CausalEdge]:
        return [self._edges[k] for k in sorted(self._edges, key=lambda k: (k[0], k[1], k[2].value))]

    def has_node(self, concept: str) -> bool:
        return concept in self._nodes

    def has_connection(self, a: str, b: str) -> bool:
        """True when any edge of any type joins a and b, in either direction."""
        return b in self._out.get(a, ()) or b in self._in.get(a, ())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CausalGraph):
            return NotImplemented
        return self._nodes == other._nodes and self._edges == other._edges

    # --- mutation -----------------------------------------------------------

    def _ensure_node(self, concept: str) -> None:
        if concept not in self._nodes:
            self._nodes[concept] = ConceptNode(id=concept, display_label=concept)
            self._out[concept] = set()
            self._in[concept] = set()
            self._in_degree[concept] = 0
            self._out_degree[concept] = 0

    def upsert_assertion(self, assertion: CausalAssertion) -> None:
        """Merge one assertion into the graph, creating endpoints as needed."""
        self._ensure_node(assertion.cause)
        self._ensure_node(assertion.effect)
        key = (assertion.cause, assertion.effect, assertion.relationship)
        edge = self._edges.get(key)
        if edge is None:
            edge = CausalEdge(
                cause=assertion.cause,
                effect=assertion.effect,
                relationship=assertion.relationship,
                polarity=assertion.polarity,
                support_count=1,
                source_docs={assertion.source_doc},
                polarity_counts={assertion.polarity: 1},
            )
            self._edges[key] = edge
            self._index_edge(edge)
        else:
            edge.support_count += 1
            edge.source_docs.add(assertion.source_doc)
            edge.polarity_counts[assertion.polarity] = (
                edge.polarity_counts.get(assertion.polarity, 0) + 1
            )
            edge.polarity = _majority_polarity(edge.polarity_counts)

    def _index_edge(self, edge: CausalEdge) -> None:
        self._out[edge.cause].add(edge.effect)
        self._in[edge.effect].add(edge.cause)
        self._out_degree[edge.cause] += 1
        self._in_degree[edge.effect] += 1
        if edge.relationship is Relationship.CORRELATION:
            self._out[edge.effect].add(edge.cause)
            self._in[edge.cause].add(edge.effect)
            self._out_degree[edge.effect] += 1
            self._in_degree[edge.cause] += 1

    # --- queries --------------------------------------------------------------

    def neighbor_set(self, concept: str, direction: Direction = Direction.UNDIRECTED) -> set[str]:
        if concept not in self._nodes:
            raise UnknownConcept(concept)
        direction = Direction(direction)
        if direction is Direction.IN:
            return set(self._in[concept])
        if direction is Direction.OUT:
            return set(self._out[concept])
        return self._in[concept] | self._out[concept]

    def degree(self, concept: str, direction: Direction = Direction.IN) -> int:
        if concept not in self._nodes:
            raise UnknownConcept(concept)
        direction = Direction(direction)
        if direction is Direction.IN:
            return self._in_degree[concept]
        if direction is Direction.OUT:
            return self._out_degree[concept]
        return self._in_degree[concept] + self._out_degree[concept]

    def degree_ranking(
        self, k: int, direction: Direction = Direction.IN
    ) -> list[tuple[str, int]]:
        """Top-k concepts by degree, ties broken lexicographically by id."""
        if k < 0:
            raise ValueError("k must be >= 0")
        ranked = sorted(
            ((concept, self.degree(concept, direction)) for concept in self._nodes),
            key=lambda item: (-item[1], item[0]),
        )
        return ranked[:k]

    @classmethod
    def from_assertions(cls, assertions) -> "CausalGraph":
        graph = cls()
        for assertion in assertions:
            graph.upsert_assertion(assertion)
        return graph


def format_degree_report(ranking: list[tuple[str, int]]) -> str:
    """Rank / concept / degree table, one row per concept."""
    lines = ["rank\tconcept\tdegree"]
    for rank, (concept, degree) in enumerate(ranking, start=1):
        lines.append(f"{rank}\t{concept}\t{degree}")
    return "\n".join(lines)


# --- persistence ----------------------------------------------------------------


def save_graph(graph: CausalGraph, path: str) -> None:
    """Canonical dump: header, nodes sorted by id, edges sorted by key."""
    lines = [
        canonical_json(
            {
                "format": FORMAT_TAG,
                "node_count": graph.node_count,
                "edge_count": graph.edge_count,
            }
        )
    ]
    for node in graph.nodes():
        lines.append(canonical_json({"id": node.id, "label": node.display_label}))
    for edge in graph.edges():
        lines.append(
            canonical_json(
                {
                    "cause": edge.cause,
                    "effect": edge.effect,
                    "relationship": edge.relationship.value,
                    "polarity": edge.polarity.value,
                    "polarity_counts": {
                        p.value: edge.polarity_counts.get(p, 0) for p in Polarity
                    },
                    "source_docs": sorted(edge.source_docs),
                    "support_count": edge.support_count,
                }
            )
        )
    atomic_write_text(path, "\n".join(lines) + "\n")


def _parse_line(line: str, line_no: int) -> dict:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise CorruptRecord(line_no, f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise CorruptRecord(line_no, "expected a JSON object")
    return obj


def load_graph(path: str) -> CausalGraph:
    """Reconstruct a graph, validating every structural invariant on the way in."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            lines = [line.rstrip("\n") for line in handle]
    except OSError as exc:
        raise IoFailure(f"cannot read graph {path}: {exc}") from exc
    lines = [line for line in lines if line.strip()]
    if not lines:
        raise CorruptRecord(1, "empty graph file")

    header = _parse_line(lines[0], 1)
    if header.get("format") != FORMAT_TAG:
        raise CorruptRecord(1, f"unsupported format {header.get('format')!r}")
    node_count = header.get("node_count")
    edge_count = header.get("edge_count")
    if not isinstance(node_count, int) or not isinstance(edge_count, int):
        raise CorruptRecord(1, "header is missing counts")
    if len(lines) != 1 + node_count + edge_count:
        raise InvariantViolation(
            f"expected {node_count} node and {edge_count} edge lines, found {len(lines) - 1}"
        )

    graph = CausalGraph()
    for offset in range(node_count):
        line_no = 2 + offset
        obj = _parse_line(lines[line_no - 1], line_no)
        try:
            node = ConceptNode(id=obj["id"], display_label=obj["label"])
        except (KeyError, TypeError) as exc:
            raise CorruptRecord(line_no, f"bad node record: {exc}") from exc
        except ValueError as exc:
            raise InvariantViolation(str(exc)) from exc
        if node.id in graph._nodes:
            raise InvariantViolation(f"duplicate node id {node.id!r}")
        graph._nodes[node.id] = node
        graph._out[node.id] = set()
        graph._in[node.id] = set()
        graph._in_degree[node.id] = 0
        graph._out_degree[node.id] = 0

    for offset in range(edge_count):
        line_no = 2 + node_count + offset
        obj = _parse_line(lines[line_no - 1], line_no)
        try:
            relationship = Relationship(obj["relationship"])
            polarity_counts = {
                Polarity(name): int(count)
                for name, count in obj["polarity_counts"].items()
                if int(count) > 0
            }
            edge = CausalEdge(
                cause=obj["cause"],
                effect=obj["effect"],
                relationship=relationship,
                polarity=Polarity(obj["polarity"]),
                support_count=int(obj["support_count"]),
                source_docs=set(obj["source_docs"]),
                polarity_counts=polarity_counts,
            )
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise CorruptRecord(line_no, f"bad edge record: {exc}") from exc
        if edge.cause not in graph._nodes or edge.effect not in graph._nodes:
            raise InvariantViolation(
                f"edge ({edge.cause!r} -> {edge.effect!r}) names a missing node"
            )
        if edge.key in graph._edges:
            raise InvariantViolation(f"duplicate edge key {edge.key!r}")
        if edge.support_count < 1 or edge.support_count != sum(polarity_counts.values()):
            raise InvariantViolation(
                f"edge ({edge.cause!r} -> {edge.effect!r}) has inconsistent support tally"
            )
        if not edge.source_docs:
            raise InvariantViolation(
                f"edge ({edge.cause!r} -> {edge.effect!r}) has no provenance"
            )
        if edge.polarity is not _majority_polarity(polarity_counts):
            raise InvariantViolation(
                f"edge ({edge.cause!r} -> {edge.effect!r}) polarity disagrees with its tally"
            )
        graph._edges[edge.key] = edge
        graph._index_edge(edge)
    return graph
