#!/usr/bin/env python3
"""Hypothesis generation for focus-anchored candidate pairs.

Reuses the mini corpus to build a graph, predicts links around "well-being",
and asks the offline provider for one testable statement per pair.
"""

import os

from causaforge import (
    CausalGraph,
    EmbeddingConfig,
    FilterCriteria,
    MockProvider,
    RateBudget,
    SimulatedClock,
    chunk_text,
    filter_documents,
    generate_hypotheses,
    generate_walks,
    load_corpus,
    predict_links,
    select_focus_pairs,
    strip_references,
    train_embeddings,
)
from causaforge.extraction import extract_from_chunks
from causaforge.hypogen import build_hypothesis_prompt
from causaforge.linkpred import shared_neighbors

DATA = os.path.join(os.path.dirname(__file__), "..", "data")

docs = filter_documents(
    load_corpus(os.path.join(DATA, "mini_corpus.jsonl")),
    FilterCriteria(keywords=("psychol",)),
)
chunks = [
    chunk
    for doc in docs
    for chunk in chunk_text(strip_references(doc.body_text), doc.doc_id, 400)
]
provider = MockProvider()
assertions, _ = extract_from_chunks(chunks, provider, RateBudget(), clock=SimulatedClock())
graph = CausalGraph.from_assertions(assertions)

config = EmbeddingConfig(dims=32, walk_length=20, walks_per_node=10, window=5, epochs=3,
                         initial_learning_rate=0.05, seed=7)
table = train_embeddings(generate_walks(graph, config), config)

ranked = predict_links(graph, table, threshold=0.0, top_k=50, focus={"well-being"})
pairs = select_focus_pairs(ranked, "well-being", cap=130)
print(f"{len(pairs)} focus-anchored candidate pairs\n")

print("prompt for the top pair:")
print("-" * 60)
print(build_hypothesis_prompt(pairs[0], shared_neighbors(graph, pairs[0].a, pairs[0].b)))
print("-" * 60)

hypotheses = generate_hypotheses(
    pairs, provider, RateBudget(), graph, clock=SimulatedClock(),
    created_at="1970-01-01T00:00:00+00:00",
)
print(f"\n{len(hypotheses)} hypotheses:")
for h in hypotheses:
    print(f"  [{h.id}] ({h.concept_a} ; {h.concept_b}) jaccard={h.jaccard:.2f}")
    print(f"        {h.statement}")
