#!/usr/bin/env python3
"""From raw articles to a causal concept graph, offline.

Walks the first half of the pipeline on the bundled ten-document corpus:
relevance filtering, reference stripping, chunking, mock extraction, and
graph accumulation, ending with the in-degree ranking table.
"""

import os

from causaforge import (
    CausalGraph,
    FilterCriteria,
    MockProvider,
    RateBudget,
    SimulatedClock,
    chunk_text,
    filter_documents,
    load_corpus,
    strip_references,
)
from causaforge.extraction import extract_from_chunks
from causaforge.graph import Direction, format_degree_report

DATA = os.path.join(os.path.dirname(__file__), "..", "data")

docs = load_corpus(os.path.join(DATA, "mini_corpus.jsonl"))
print(f"corpus: {len(docs)} documents")

criteria = FilterCriteria(keywords=("psychol",), journal_required_term="psychol")
kept = filter_documents(docs, criteria)
print(f"after relevance filter: {len(kept)} documents")

chunks = []
for doc in kept:
    body = strip_references(doc.body_text)
    chunks.extend(chunk_text(body, doc.doc_id, max_tokens=400))
print(f"chunks: {len(chunks)} (references stripped before chunking)")

provider = MockProvider()  # deterministic offline stand-in for the real model
assertions, failures = extract_from_chunks(
    chunks, provider, RateBudget(), clock=SimulatedClock()
)
print(f"extracted assertions: {len(assertions)} ({failures} unparseable responses)")

graph = CausalGraph.from_assertions(assertions)
print(f"graph: {graph.node_count} concepts, {graph.edge_count} edges\n")

print("top concepts by in-degree:")
print(format_degree_report(graph.degree_ranking(10, Direction.IN)))
