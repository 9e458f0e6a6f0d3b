"""causaforge: causal concept graphs from scientific text.

The pipeline stages, in order: corpus ingestion and chunking, LLM-backed
causal pair extraction, graph accumulation, node embedding, link prediction,
hypothesis generation, and statistical evaluation of hypothesis sets.
"""

from . import errors
from .corpus import (
    DocumentRecord,
    FilterCriteria,
    TextChunk,
    chunk_text,
    filter_documents,
    load_corpus,
    strip_references,
    token_estimate,
)
from .embedding import (
    EmbeddingConfig,
    EmbeddingTable,
    cosine_similarity,
    generate_walks,
    load_embeddings,
    save_embeddings,
    train_embeddings,
)
from .extraction import (
    CausalAssertion,
    Polarity,
    RawAssertion,
    Rejection,
    RejectionReason,
    Relationship,
    build_extraction_prompt,
    normalize_and_validate,
    normalize_concept,
    parse_response,
    serialize_assertions,
)
from .graph import CausalGraph, CausalEdge, ConceptNode, Direction, load_graph, save_graph
from .hypogen import Hypothesis, build_hypothesis_prompt, generate_hypotheses, select_focus_pairs
from .linkpred import (
    CandidatePair,
    enumerate_candidates,
    jaccard_score,
    predict_links,
    rank_candidates,
    score_candidates,
)
from .mockembed import mock_vector, mock_embedding_table, write_mock_vectors
from .providers import HttpProvider, MockProvider, ProviderRequest, ProviderResponse
from .ratelimit import RateBudget, RateLimiter, SimulatedClock, SystemClock, rate_limited_submit

__version__ = "0.1.0"

__all__ = [
    "CandidatePair",
    "CausalAssertion",
    "CausalEdge",
    "CausalGraph",
    "ConceptNode",
    "Direction",
    "DocumentRecord",
    "EmbeddingConfig",
    "EmbeddingTable",
    "FilterCriteria",
    "HttpProvider",
    "Hypothesis",
    "MockProvider",
    "Polarity",
    "ProviderRequest",
    "ProviderResponse",
    "RateBudget",
    "RateLimiter",
    "RawAssertion",
    "Rejection",
    "RejectionReason",
    "Relationship",
    "SimulatedClock",
    "SystemClock",
    "TextChunk",
    "build_extraction_prompt",
    "build_hypothesis_prompt",
    "chunk_text",
    "cosine_similarity",
    "enumerate_candidates",
    "errors",
    "filter_documents",
    "generate_hypotheses",
    "generate_walks",
    "jaccard_score",
    "load_corpus",
    "load_embeddings",
    "load_graph",
    "mock_embedding_table",
    "mock_vector",
    "normalize_and_validate",
    "normalize_concept",
    "parse_response",
    "predict_links",
    "rank_candidates",
    "rate_limited_submit",
    "save_embeddings",
    "save_graph",
    "score_candidates",
    "select_focus_pairs",
    "serialize_assertions",
    "strip_references",
    "token_estimate",
    "train_embeddings",
    "write_mock_vectors",
]
