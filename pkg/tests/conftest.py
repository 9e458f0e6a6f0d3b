"""Shared test helpers: independent oracles and random-instance generators.

The oracles here deliberately re-derive results from first principles (raw
edge lists, direct set algebra, quadrature) instead of calling back into the
code paths they check.
"""

from __future__ import annotations

import math
import os
import random

import numpy as np

from causaforge.extraction import CausalAssertion, Polarity, Relationship
from causaforge.graph import CausalGraph

REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DATA_DIR = os.path.join(REPO_ROOT, "data")
FIXTURE_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "fixtures")


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURE_DIR, name)


def read_fixture(name: str) -> str:
    with open(fixture_path(name), "r", encoding="utf-8") as handle:
        return handle.read()


# --- random graph instances -------------------------------------------------


def random_assertions(
    rng: random.Random,
    n_nodes: int,
    n_assertions: int,
    correlation_share: float = 0.25,
) -> list[CausalAssertion]:
    names = [f"concept {i:03d}" for i in range(n_nodes)]
    assertions = []
    for k in range(n_assertions):
        cause, effect = rng.sample(names, 2)
        if rng.random() < correlation_share:
            relationship, polarity = Relationship.CORRELATION, Polarity.NONE
        else:
            relationship = Relationship.CAUSALITY
            polarity = rng.choice([Polarity.POSITIVE, Polarity.NEGATIVE, Polarity.NONE])
        assertions.append(
            CausalAssertion(
                cause=cause,
                effect=effect,
                relationship=relationship,
                polarity=polarity,
                source_doc=f"PMC{rng.randrange(100):03d}",
                chunk_index=k % 5,
            )
        )
    return assertions


def random_graph(rng: random.Random, n_nodes: int, n_assertions: int) -> CausalGraph:
    return CausalGraph.from_assertions(random_assertions(rng, n_nodes, n_assertions))


# --- degree recount oracle ---------------------------------------------------


def recount_degrees(graph: CausalGraph) -> tuple[dict[str, int], dict[str, int]]:
    """Arc-count degrees recomputed from the serialized edge list alone."""
    in_deg = {v: 0 for v in graph.node_ids()}
    out_deg = {v: 0 for v in graph.node_ids()}
    for edge in graph.edges():
        out_deg[edge.cause] += 1
        in_deg[edge.effect] += 1
        if edge.relationship is Relationship.CORRELATION:
            out_deg[edge.effect] += 1
            in_deg[edge.cause] += 1
    return in_deg, out_deg


# --- link-prediction oracle --------------------------------------------------


def brute_force_ranked_candidates(graph, table, threshold, k, focus=None):
    """Exhaustive enumerate+score+rank from the raw edge list and set algebra."""
    nodes = graph.node_ids()
    connected: set[tuple[str, str]] = set()
    neighbors: dict[str, set[str]] = {v: set() for v in nodes}
    for edge in graph.edges():
        connected.add((edge.cause, edge.effect))
        connected.add((edge.effect, edge.cause))
        neighbors[edge.cause].add(edge.effect)
        neighbors[edge.effect].add(edge.cause)
    rows = []
    for i, a in enumerate(nodes):
        for b in nodes[i + 1 :]:
            if (a, b) in connected:
                continue
            if focus is not None and a not in focus and b not in focus:
                continue
            u, v = table[a], table[b]
            denominator = math.sqrt(float(np.dot(u, u)) * float(np.dot(v, v)))
            cosine = max(-1.0, min(1.0, float(np.dot(u, v)) / denominator))
            if cosine < threshold:
                continue
            set_a = neighbors[a] - {a, b}
            set_b = neighbors[b] - {a, b}
            union = set_a | set_b
            jaccard = len(set_a & set_b) / len(union) if union else 0.0
            rows.append((a, b, cosine, jaccard))
    rows.sort(key=lambda r: (-r[3], -r[2], r[0], r[1]))
    return rows[:k]


# --- rate-limit window verifier ----------------------------------------------


def assert_window_budgets(log, max_requests: int, max_tokens: int, window: float = 60.0):
    """Check every window [t_i, t_i + 60) of the dispatch log against both budgets."""
    times = [t for t, _ in log]
    for i, start in enumerate(times):
        count = 0
        tokens = 0
        for t, tok in log:
            if start <= t < start + window:
                count += 1
                tokens += tok
        assert count <= max_requests, f"window at {start}: {count} requests"
        assert tokens <= max_tokens, f"window at {start}: {tokens} tokens"


# --- quadrature oracles for distribution tails --------------------------------


def f_tail_quadrature(f_value: float, df1: int, df2: int) -> float:
    """Upper tail of the F distribution by adaptive quadrature of its density."""
    import math

    from scipy.integrate import quad

    log_const = (
        math.lgamma((df1 + df2) / 2)
        - math.lgamma(df1 / 2)
        - math.lgamma(df2 / 2)
        + (df1 / 2) * math.log(df1 / df2)
    )

    def density(x):
        return math.exp(
            log_const + (df1 / 2 - 1) * math.log(x) - ((df1 + df2) / 2) * math.log(1 + df1 * x / df2)
        )

    value, _ = quad(density, f_value, np.inf, limit=300)
    return value


def t_tail_quadrature(t_value: float, df: int) -> float:
    """Two-sided tail of Student's t by quadrature."""
    import math

    from scipy.integrate import quad

    log_const = math.lgamma((df + 1) / 2) - math.lgamma(df / 2) - 0.5 * math.log(df * math.pi)

    def density(x):
        return math.exp(log_const - ((df + 1) / 2) * math.log(1 + x * x / df))

    value, _ = quad(density, abs(t_value), np.inf, limit=300)
    return 2.0 * value
