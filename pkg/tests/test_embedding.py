import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from causaforge.embedding import (
    EmbeddingConfig,
    EmbeddingTable,
    cosine_similarity,
    generate_walks,
    load_embeddings,
    mean_cross_cosine,
    mean_pairwise_cosine,
    save_embeddings,
    sgns_pair_objective,
    single_walk,
    train_embeddings,
    walk_rng,
)
from causaforge.errors import DegenerateCorpus, ZeroVector
from causaforge.extraction import CausalAssertion, Polarity, Relationship
from causaforge.graph import CausalGraph, Direction
from conftest import random_assertions


def causal(cause, effect):
    return CausalAssertion(cause, effect, Relationship.CAUSALITY, Polarity.NONE, "PMC1", 0)


def cycle_graph(n: int) -> CausalGraph:
    names = [f"n{i}" for i in range(n)]
    return CausalGraph.from_assertions(
        [causal(names[i], names[(i + 1) % n]) for i in range(n)]
    )


def two_cliques_with_bridge(size: int = 10) -> tuple[CausalGraph, list[str], list[str]]:
    left = [f"a{i:02d}" for i in range(size)]
    right = [f"b{i:02d}" for i in range(size)]
    assertions = []
    for clique in (left, right):
        for i, u in enumerate(clique):
            for v in clique[i + 1 :]:
                assertions.append(causal(u, v))
    assertions.append(causal(left[0], right[0]))
    return CausalGraph.from_assertions(assertions), left, right


class TestWalks:
    def test_isolated_node_single_step(self):
        graph = CausalGraph.from_assertions([causal("a", "b")])
        config = EmbeddingConfig(directed=True, walk_length=10, walks_per_node=2, seed=1)
        walks = generate_walks(graph, config)
        # "b" has no out-neighbors in directed mode: its walks stop immediately.
        assert [w for w in walks if w[0] == "b"] == [["b"], ["b"]]

    def test_same_seed_same_walks(self):
        graph = cycle_graph(8)
        config = EmbeddingConfig(walk_length=20, walks_per_node=5, seed=99)
        assert generate_walks(graph, config) == generate_walks(graph, config)

    def test_different_seed_differs(self):
        graph = cycle_graph(8)
        config = EmbeddingConfig(walk_length=20, walks_per_node=5, seed=99)
        assert generate_walks(graph, config) != generate_walks(graph, config, seed=100)

    def test_walks_are_paths_in_neighbor_view(self):
        rng = random.Random(21)
        graph = CausalGraph.from_assertions(random_assertions(rng, 12, 40))
        config = EmbeddingConfig(walk_length=15, walks_per_node=3, seed=5)
        for walk in generate_walks(graph, config):
            for prev, nxt in zip(walk, walk[1:]):
                assert nxt in graph.neighbor_set(prev, Direction.UNDIRECTED)

    def test_walk_count_and_starts(self):
        graph = cycle_graph(6)
        config = EmbeddingConfig(walk_length=10, walks_per_node=4, seed=2)
        walks = generate_walks(graph, config)
        assert len(walks) == 6 * 4
        starts = sorted({w[0] for w in walks})
        assert starts == graph.node_ids()

    def test_six_cycle_uniform_transitions(self):
        # With p = q = 1 every step is uniform over the two cycle neighbors.
        graph = cycle_graph(6)
        config = EmbeddingConfig(
            walk_length=2_000, walks_per_node=10, seed=1234, return_param_p=1.0, inout_param_q=1.0
        )
        walks = generate_walks(graph, config)
        clockwise = 0
        total = 0
        order = {f"n{i}": i for i in range(6)}
        for walk in walks:
            for prev, nxt in zip(walk, walk[1:]):
                total += 1
                if (order[prev] + 1) % 6 == order[nxt]:
                    clockwise += 1
        assert total >= 100_000
        frequency = clockwise / total
        assert abs(frequency - 0.5) < 0.02

    def test_relabel_equivariance_with_matched_streams(self):
        # Order-preserving relabeling keeps sorted adjacency aligned, so a walk
        # driven by the same stream maps node-for-node.
        rng = random.Random(17)
        graph = CausalGraph.from_assertions(random_assertions(rng, 10, 30))
        relabel = {v: f"x {v}" for v in graph.node_ids()}  # prefix preserves order
        mapped = CausalGraph()
        for edge in graph.edges():
            mapped.upsert_assertion(
                CausalAssertion(
                    relabel[edge.cause],
                    relabel[edge.effect],
                    edge.relationship,
                    edge.polarity,
                    "PMC1",
                    0,
                )
            )
        config = EmbeddingConfig(walk_length=12, seed=3)
        for node in graph.node_ids():
            walk = single_walk(graph, node, config, walk_rng(3, node, 0))
            twin = single_walk(mapped, relabel[node], config, walk_rng(3, node, 0))
            assert twin == [relabel[v] for v in walk]


class TestSgnsTraining:
    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(0)
        dims = 8
        center = rng.normal(0, 0.5, dims)
        outputs = rng.normal(0, 0.5, (5, dims))
        labels = np.array([1.0, 0.0, 0.0, 0.0, 0.0])
        _, grad_center, grad_outputs = sgns_pair_objective(center, outputs, labels)

        h = 1e-5

        def loss_at(c, o):
            return sgns_pair_objective(c, o, labels)[0]

        worst = 0.0
        for i in range(dims):
            bump = np.zeros(dims)
            bump[i] = h
            numeric = (loss_at(center + bump, outputs) - loss_at(center - bump, outputs)) / (2 * h)
            worst = max(worst, abs(numeric - grad_center[i]) / max(abs(numeric), 1e-8))
        for r in range(outputs.shape[0]):
            for i in range(dims):
                bump = np.zeros_like(outputs)
                bump[r, i] = h
                numeric = (loss_at(center, outputs + bump) - loss_at(center, outputs - bump)) / (2 * h)
                worst = max(worst, abs(numeric - grad_outputs[r, i]) / max(abs(numeric), 1e-8))
        assert worst < 1e-4

    def test_same_walks_same_seed_identical_tables(self):
        graph = cycle_graph(8)
        config = EmbeddingConfig(dims=16, walk_length=12, walks_per_node=4, window=3, epochs=2, seed=44)
        walks = generate_walks(graph, config)
        table_a = train_embeddings(walks, config)
        table_b = train_embeddings(walks, config)
        assert sorted(table_a.vectors) == sorted(table_b.vectors)
        for key in table_a.vectors:
            assert np.array_equal(table_a.vectors[key], table_b.vectors[key])

    def test_epoch_losses_non_increasing_within_tolerance(self):
        graph = cycle_graph(10)
        config = EmbeddingConfig(dims=16, walk_length=20, walks_per_node=6, window=4, epochs=5, seed=9)
        table = train_embeddings(generate_walks(graph, config), config)
        assert len(table.epoch_losses) == 5
        for earlier, later in zip(table.epoch_losses, table.epoch_losses[1:]):
            assert later <= earlier * 1.05

    def test_covers_every_graph_node(self):
        graph = CausalGraph.from_assertions([causal("a", "b"), causal("c", "d")])
        config = EmbeddingConfig(dims=8, walk_length=5, walks_per_node=2, window=2, epochs=1, seed=0)
        table = train_embeddings(generate_walks(graph, config), config)
        assert sorted(table.vectors) == graph.node_ids()

    def test_degenerate_corpus(self):
        with pytest.raises(DegenerateCorpus):
            train_embeddings([], EmbeddingConfig())
        with pytest.raises(DegenerateCorpus):
            train_embeddings([["solo"], ["alone"]], EmbeddingConfig(seed=0))

    def test_clique_structure_separates(self):
        graph, left, right = two_cliques_with_bridge(6)
        config = EmbeddingConfig(
            dims=24, walk_length=20, walks_per_node=8, window=4, epochs=3,
            initial_learning_rate=0.05, seed=42,
        )
        table = train_embeddings(generate_walks(graph, config), config)
        intra = (mean_pairwise_cosine(table, left) + mean_pairwise_cosine(table, right)) / 2
        inter = mean_cross_cosine(table, left, right)
        assert intra > inter


class TestCosine:
    def test_identical_vectors(self):
        v = np.array([1.0, 2.0, 3.0])
        assert cosine_similarity(v, v) == 1.0

    def test_orthogonal(self):
        assert cosine_similarity(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 0.0

    def test_opposite(self):
        v = np.array([0.3, -2.0, 5.0])
        assert cosine_similarity(v, -v) == -1.0

    def test_zero_vector(self):
        with pytest.raises(ZeroVector):
            cosine_similarity(np.zeros(3), np.array([1.0, 0.0, 0.0]))

    @given(
        values=st.lists(st.floats(-50, 50), min_size=2, max_size=8),
        other=st.lists(st.floats(-50, 50), min_size=2, max_size=8),
        alpha=st.floats(min_value=0.001, max_value=100.0),
    )
    @settings(max_examples=150)
    def test_scale_invariance(self, values, other, alpha):
        size = min(len(values), len(other))
        u = np.array(values[:size])
        v = np.array(other[:size])
        # Skip vectors whose squared norm underflows double precision.
        if float(np.dot(u, u)) == 0 or float(np.dot(v, v)) == 0:
            return
        scaled = alpha * v
        if float(np.dot(scaled, scaled)) == 0:
            return
        assert cosine_similarity(u, scaled) == pytest.approx(
            cosine_similarity(u, v), abs=1e-9
        )


class TestEmbeddingIo:
    def test_round_trip_exact(self, tmp_path):
        rng = np.random.default_rng(3)
        table = EmbeddingTable(
            vectors={f"c{i}": rng.normal(0, 1, 12) for i in range(9)}, dims=12
        )
        path = tmp_path / "emb.tsv"
        save_embeddings(table, str(path))
        loaded = load_embeddings(str(path))
        assert loaded.dims == 12
        for key in table.vectors:
            assert np.array_equal(loaded.vectors[key], table.vectors[key])

    def test_header_validated(self, tmp_path):
        path = tmp_path / "emb.tsv"
        path.write_text("wrong header\n")
        from causaforge.errors import CorruptRecord

        with pytest.raises(CorruptRecord):
            load_embeddings(str(path))
