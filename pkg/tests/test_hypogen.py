import pytest

from causaforge.errors import ProviderExhausted
from causaforge.extraction import CausalAssertion, Polarity, Relationship
from causaforge.graph import CausalGraph
from causaforge.hypogen import (
    Hypothesis,
    build_hypothesis_prompt,
    generate_hypotheses,
    load_hypotheses,
    save_hypotheses,
    select_focus_pairs,
)
from causaforge.linkpred import CandidatePair, shared_neighbors
from causaforge.providers import MockProvider, store_fixture
from causaforge.ratelimit import RateBudget, SimulatedClock
from conftest import read_fixture


def pair(a, b, cosine=0.5, jaccard=0.5):
    return CandidatePair(a=a, b=b, cosine=cosine, jaccard=jaccard)


def chain_graph(*names):
    assertions = [
        CausalAssertion(u, v, Relationship.CAUSALITY, Polarity.NONE, "PMC1", 0)
        for u, v in zip(names, names[1:])
    ]
    return CausalGraph.from_assertions(assertions)


class TestSelectFocusPairs:
    def test_focus_endpoint_kept(self):
        ranked = [pair("divergent thinking exercises", "well-being")]
        assert select_focus_pairs(ranked, "well-being") == ranked

    def test_non_focus_dropped(self):
        ranked = [pair("a", "b"), pair("b", "well-being")]
        assert select_focus_pairs(ranked, "well-being") == [ranked[1]]

    def test_cap_truncates_to_130(self):
        ranked = [pair(f"concept {i:03d}", "well-being") for i in range(200)]
        kept = select_focus_pairs(ranked, "well-being")
        assert len(kept) == 130
        assert kept == ranked[:130]

    def test_rank_order_preserved(self):
        ranked = [pair("c", "well-being"), pair("a", "well-being"), pair("b", "well-being")]
        assert select_focus_pairs(ranked, "well-being", cap=2) == ranked[:2]


class TestPrompt:
    def test_names_both_concepts(self):
        prompt = build_hypothesis_prompt(pair("microbiome diversity", "well-being"), [])
        assert "microbiome diversity" in prompt and "well-being" in prompt

    def test_context_capped_at_five(self):
        context = [f"n{i}" for i in range(9)]
        prompt = build_hypothesis_prompt(pair("a", "b"), context)
        assert "n4" in prompt and "n5" not in prompt

    def test_context_section_omitted_when_empty(self):
        prompt = build_hypothesis_prompt(pair("a", "b"), [])
        assert "neighboring" not in prompt

    def test_golden_prompt_pinned(self):
        prompt = build_hypothesis_prompt(
            pair("online social connectivity", "well-being", cosine=0.73, jaccard=0.42),
            ["perceived stress", "social support"],
        )
        assert prompt == read_fixture("golden_hypothesis_prompt.txt")


class _FailingOnPair:
    """Mock provider that errors for prompts naming a given concept."""

    def __init__(self, poison: str):
        self.poison = poison
        self.inner = MockProvider()

    def complete(self, prompt, model_tag="gpt-4"):
        if self.poison in prompt:
            raise ConnectionError("provider down")
        return self.inner.complete(prompt, model_tag)


class TestGenerate:
    def make_graph(self):
        return chain_graph("alpha", "shared", "well-being", "omega")

    def test_one_hypothesis_per_pair(self):
        graph = self.make_graph()
        pairs = [pair("alpha", "well-being"), pair("omega", "shared")]
        out = generate_hypotheses(
            pairs, MockProvider(), RateBudget(), graph, clock=SimulatedClock(),
            created_at="1970-01-01T00:00:00+00:00",
        )
        assert [(h.concept_a, h.concept_b) for h in out] == [
            ("alpha", "well-being"),
            ("omega", "shared"),
        ]
        assert all(h.statement for h in out)
        assert [h.id for h in out] == ["h0001", "h0002"]

    def test_duplicates_collapsed_before_submission(self):
        graph = self.make_graph()
        provider = MockProvider()
        pairs = [pair("alpha", "well-being"), pair("alpha", "well-being")]
        out = generate_hypotheses(
            pairs, provider, RateBudget(), graph, clock=SimulatedClock(),
            created_at="1970-01-01T00:00:00+00:00",
        )
        assert len(out) == 1
        assert provider.calls == 1

    def test_failure_isolated_per_pair(self):
        graph = self.make_graph()
        provider = _FailingOnPair("alpha")
        failures = []
        out = generate_hypotheses(
            [pair("alpha", "well-being"), pair("omega", "shared")],
            provider,
            RateBudget(),
            graph,
            clock=SimulatedClock(),
            created_at="1970-01-01T00:00:00+00:00",
            failures=failures,
        )
        assert [(h.concept_a, h.concept_b) for h in out] == [("omega", "shared")]
        assert len(failures) == 1
        assert failures[0][0].a == "alpha"
        assert isinstance(failures[0][1], ProviderExhausted)

    def test_table4_fixture_statement_verbatim(self, tmp_path):
        graph = chain_graph("online social connectivity", "shared", "well-being")
        candidate = pair("online social connectivity", "well-being", cosine=0.7, jaccard=0.3)
        prompt = build_hypothesis_prompt(
            candidate, shared_neighbors(graph, candidate.a, candidate.b)
        )
        statement = read_fixture("table4_virtual_resilience.txt")
        store_fixture(str(tmp_path), prompt, statement)
        out = generate_hypotheses(
            [candidate], MockProvider(fixture_dir=str(tmp_path)), RateBudget(), graph,
            clock=SimulatedClock(), created_at="1970-01-01T00:00:00+00:00",
        )
        assert out[0].statement == statement
        assert out[0].statement.startswith("Virtual resilience:")

    def test_mock_stage_is_deterministic(self):
        graph = self.make_graph()
        pairs = [pair("alpha", "well-being"), pair("omega", "shared")]

        def run():
            return generate_hypotheses(
                pairs, MockProvider(), RateBudget(), graph, clock=SimulatedClock(),
                created_at="1970-01-01T00:00:00+00:00",
            )

        assert run() == run()

    def test_submission_respects_rate_budget(self):
        graph = chain_graph("alpha", "beta", "gamma", "delta")
        clock = SimulatedClock()
        pairs = [pair("alpha", "gamma"), pair("beta", "delta"), pair("alpha", "delta")]
        out = generate_hypotheses(
            pairs, MockProvider(), RateBudget(max_requests_per_minute=1),
            graph, clock=clock, created_at="1970-01-01T00:00:00+00:00",
        )
        assert len(out) == 3
        # one request per minute: the third dispatch cannot precede t = 120 s
        assert clock.now() >= 120.0

    def test_every_output_pair_from_input(self):
        graph = self.make_graph()
        pairs = [pair("alpha", "well-being")]
        out = generate_hypotheses(
            pairs, MockProvider(), RateBudget(), graph, clock=SimulatedClock(),
            created_at="1970-01-01T00:00:00+00:00",
        )
        input_keys = {(p.a, p.b) for p in pairs}
        assert all((h.concept_a, h.concept_b) in input_keys for h in out)


class TestHypothesisIo:
    def test_round_trip(self, tmp_path):
        hypotheses = [
            Hypothesis(
                id="h0001",
                concept_a="a",
                concept_b="b",
                statement="A raises B.",
                cosine=0.5,
                jaccard=0.25,
                provider_tag="mock",
                created_at="1970-01-01T00:00:00+00:00",
            )
        ]
        path = tmp_path / "hypotheses.jsonl"
        save_hypotheses(hypotheses, str(path))
        assert load_hypotheses(str(path)) == hypotheses

    def test_empty_statement_rejected(self):
        with pytest.raises(ValueError):
            Hypothesis(
                id="h1", concept_a="a", concept_b="b", statement="", cosine=0.0,
                jaccard=0.0, provider_tag="mock", created_at="t",
            )
