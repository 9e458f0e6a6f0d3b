import random

import numpy as np
import pytest

from causaforge.embedding import EmbeddingConfig, EmbeddingTable, generate_walks, train_embeddings
from causaforge.errors import MissingEmbedding, UnknownConcept
from causaforge.extraction import CausalAssertion, Polarity, Relationship
from causaforge.graph import CausalGraph
from causaforge.linkpred import (
    CandidatePair,
    enumerate_candidates,
    jaccard_score,
    load_candidates,
    predict_links,
    rank_candidates,
    save_candidates,
    score_candidates,
    shared_neighbors,
)
from conftest import brute_force_ranked_candidates, random_assertions


def causal(cause, effect):
    return CausalAssertion(cause, effect, Relationship.CAUSALITY, Polarity.NONE, "PMC1", 0)


def star_table(graph, seed=0, dims=8) -> EmbeddingTable:
    rng = np.random.default_rng(seed)
    return EmbeddingTable(
        vectors={v: rng.normal(0, 1, dims) for v in graph.node_ids()}, dims=dims
    )


class TestJaccard:
    def test_identical_neighborhoods(self):
        graph = CausalGraph.from_assertions(
            [causal("a", "x"), causal("a", "y"), causal("b", "x"), causal("b", "y")]
        )
        assert jaccard_score(graph, "a", "b") == 1.0

    def test_disjoint_neighborhoods(self):
        graph = CausalGraph.from_assertions([causal("a", "x"), causal("b", "y")])
        assert jaccard_score(graph, "a", "b") == 0.0

    def test_half_overlap(self):
        graph = CausalGraph.from_assertions(
            [causal("a", "x"), causal("a", "y"), causal("a", "z"),
             causal("b", "y"), causal("b", "z"), causal("b", "w")]
        )
        assert jaccard_score(graph, "a", "b") == 0.5

    def test_symmetry(self):
        rng = random.Random(33)
        graph = CausalGraph.from_assertions(random_assertions(rng, 12, 40))
        nodes = graph.node_ids()
        for _ in range(30):
            a, b = rng.sample(nodes, 2)
            assert jaccard_score(graph, a, b) == jaccard_score(graph, b, a)

    def test_self_similarity_is_one_with_neighbors(self):
        graph = CausalGraph.from_assertions([causal("a", "x")])
        assert jaccard_score(graph, "a", "a") == 1.0

    def test_empty_union_scores_zero(self):
        graph = CausalGraph.from_assertions([causal("a", "b"), causal("c", "d")])
        # a's only neighbor is b; excluding endpoints empties both sides.
        assert jaccard_score(graph, "a", "b") == 0.0

    def test_unknown_concept(self):
        graph = CausalGraph.from_assertions([causal("a", "b")])
        with pytest.raises(UnknownConcept):
            jaccard_score(graph, "a", "ghost")

    def test_range_property(self):
        rng = random.Random(5)
        graph = CausalGraph.from_assertions(random_assertions(rng, 15, 60))
        nodes = graph.node_ids()
        for _ in range(50):
            a, b = rng.sample(nodes, 2)
            assert 0.0 <= jaccard_score(graph, a, b) <= 1.0


class TestEnumerate:
    def test_connected_pairs_never_emitted(self):
        graph = CausalGraph.from_assertions([causal("a", "b"), causal("b", "c")])
        table = star_table(graph)
        pairs = enumerate_candidates(graph, table, threshold=-1.0)
        names = {(p.a, p.b) for p in pairs}
        assert ("a", "b") not in names and ("b", "c") not in names
        assert ("a", "c") in names

    def test_threshold_gates(self):
        graph = CausalGraph.from_assertions([causal("a", "b"), causal("c", "d")])
        table = EmbeddingTable(
            vectors={
                "a": np.array([1.0, 0.0]),
                "b": np.array([1.0, 0.0]),
                "c": np.array([1.0, 0.05]),
                "d": np.array([-1.0, 0.0]),
            },
            dims=2,
        )
        pairs = enumerate_candidates(graph, table, threshold=0.9)
        assert {(p.a, p.b) for p in pairs} == {("a", "c"), ("b", "c")}

    def test_missing_embedding(self):
        graph = CausalGraph.from_assertions([causal("a", "b"), causal("c", "d")])
        table = EmbeddingTable(vectors={"a": np.array([1.0]), "b": np.array([1.0])}, dims=1)
        with pytest.raises(MissingEmbedding):
            enumerate_candidates(graph, table, threshold=-1.0)

    def test_focus_restricts_to_touching_pairs(self):
        rng = random.Random(9)
        graph = CausalGraph.from_assertions(random_assertions(rng, 14, 30))
        table = star_table(graph, seed=1)
        focus = set(graph.node_ids()[:2])
        focused = enumerate_candidates(graph, table, -1.0, focus=focus)
        full = enumerate_candidates(graph, table, -1.0)
        expected = [p for p in full if p.a in focus or p.b in focus]
        assert focused == expected

    def test_unknown_focus_concept(self):
        graph = CausalGraph.from_assertions([causal("a", "b")])
        with pytest.raises(UnknownConcept):
            enumerate_candidates(graph, star_table(graph), -1.0, focus={"ghost"})


class TestRank:
    def make(self, a, b, cosine, jaccard):
        return CandidatePair(a=a, b=b, cosine=cosine, jaccard=jaccard)

    def test_jaccard_primary(self):
        pairs = [self.make("a", "b", 0.9, 0.5), self.make("c", "d", 0.1, 0.9)]
        assert rank_candidates(pairs, 2)[0].jaccard == 0.9

    def test_cosine_breaks_jaccard_ties(self):
        pairs = [self.make("a", "b", 0.2, 0.5), self.make("c", "d", 0.8, 0.5)]
        assert rank_candidates(pairs, 2)[0].cosine == 0.8

    def test_lexicographic_final_tie_break(self):
        pairs = [self.make("c", "d", 0.5, 0.5), self.make("a", "b", 0.5, 0.5)]
        assert [p.a for p in rank_candidates(pairs, 2)] == ["a", "c"]

    def test_k_truncates(self):
        pairs = [self.make("a", "b", 0.5, 0.5), self.make("c", "d", 0.5, 0.4)]
        assert len(rank_candidates(pairs, 1)) == 1

    def test_unscored_rejected(self):
        with pytest.raises(ValueError):
            rank_candidates([CandidatePair(a="a", b="b", cosine=0.5)], 1)


class TestAgainstBruteForce:
    def test_ranked_list_matches_oracle(self):
        rng = random.Random(2024)
        for trial in range(25):
            n_nodes = rng.randrange(4, 30)
            graph = CausalGraph.from_assertions(
                random_assertions(rng, n_nodes, rng.randrange(2, 4 * n_nodes))
            )
            table = star_table(graph, seed=trial)
            threshold = rng.choice([-1.0, -0.3, 0.0, 0.2, 0.5])
            k = rng.randrange(1, 40)
            ranked = predict_links(graph, table, threshold, k)
            oracle = brute_force_ranked_candidates(graph, table, threshold, k)
            assert [(p.a, p.b, p.cosine, p.jaccard) for p in ranked] == oracle

    def test_no_connected_pair_in_output(self):
        rng = random.Random(77)
        graph = CausalGraph.from_assertions(random_assertions(rng, 20, 60))
        table = star_table(graph, seed=7)
        for pair in predict_links(graph, table, -1.0, 1000):
            assert not graph.has_connection(pair.a, pair.b)


class TestBisInterferenceScenario:
    def build(self):
        # 4-cycle: bis - bas - interference - bas reward response - bis
        return CausalGraph.from_assertions(
            [
                causal("bis", "bas"),
                causal("bis", "bas reward response"),
                causal("interference", "bas"),
                causal("interference", "bas reward response"),
            ]
        )

    def test_bis_interference_emitted_with_full_jaccard(self):
        graph = self.build()
        config = EmbeddingConfig(dims=16, walk_length=10, walks_per_node=5, window=3, epochs=2, seed=7)
        table = train_embeddings(generate_walks(graph, config), config)
        ranked = predict_links(graph, table, threshold=-1.0, top_k=10)
        pair = next(p for p in ranked if (p.a, p.b) == ("bis", "interference"))
        assert pair.jaccard == 1.0
        assert ranked[0] == pair

    def test_focus_anchored_view(self):
        graph = self.build()
        config = EmbeddingConfig(dims=16, walk_length=10, walks_per_node=5, window=3, epochs=2, seed=7)
        table = train_embeddings(generate_walks(graph, config), config)
        ranked = predict_links(graph, table, threshold=-1.0, top_k=10, focus={"bis"})
        assert [(p.a, p.b) for p in ranked] == [("bis", "interference")]

    def test_shared_neighbors_helper(self):
        graph = self.build()
        assert shared_neighbors(graph, "bis", "interference") == ["bas", "bas reward response"]


class TestCandidateIo:
    def test_round_trip(self, tmp_path):
        pairs = [
            CandidatePair(a="a", b="b", cosine=0.25, jaccard=0.5),
            CandidatePair(a="c", b="d", cosine=-0.125, jaccard=0.0),
        ]
        path = tmp_path / "candidates.jsonl"
        save_candidates(pairs, str(path))
        assert load_candidates(str(path)) == pairs

    def test_pair_ordering_enforced(self):
        with pytest.raises(ValueError):
            CandidatePair(a="z", b="a", cosine=0.5)
