"""Hypothesis generation for top-ranked candidate pairs.

Each surviving pair is turned into one natural-language hypothesis by the
provider. Pairs are filtered to a focus concept, capped, deduplicated before
submission, and rate-limited through the shared limiter. A provider failure
on one pair never takes down the rest of the batch.
"""

from __future__ import annotations

import datetime
import json
import logging
import random
from dataclasses import dataclass

from .corpus import token_estimate
from .errors import CorruptRecord, IoFailure, ProviderExhausted
from .graph import CausalGraph
from .ioutil import atomic_write_text, canonical_json
from .linkpred import CandidatePair, shared_neighbors
from .providers import Provider, ProviderRequest
from .ratelimit import Clock, RateBudget, RateLimiter, retry_with_backoff

logger = logging.getLogger(__name__)

DEFAULT_CAP = 130
MAX_CONTEXT_NEIGHBORS = 5


@dataclass(frozen=True)
class Hypothesis:
    id: str
    concept_a: str
    concept_b: str
    statement: str
    cosine: float
    jaccard: float
    provider_tag: str
    created_at: str

    def __post_init__(self) -> None:
        if not self.statement:
            raise ValueError("statement must be non-empty")


def select_focus_pairs(
    ranked: list[CandidatePair], focus: str, cap: int = DEFAULT_CAP
) -> list[CandidatePair]:
    """Keep pairs touching the focus concept, in rank order, at most `cap`."""
    if cap < 0:
        raise ValueError("cap must be >= 0")
    selected = [p for p in ranked if focus in (p.a, p.b)]
    return selected[:cap]


PROMPT_TEMPLATE = """You are assisting with research planning in psychology.

Concept A: {a}
Concept B: {b}

These two concepts are not yet linked in a causal concept graph built from the research literature, but their graph neighborhoods overlap strongly.{context_section}

Propose a single testable causal hypothesis linking Concept A and Concept B. State the expected direction of the effect and a plausible mechanism, in at most three sentences."""


def build_hypothesis_prompt(pair: CandidatePair, context: list[str]) -> str:
    """Render the generation prompt; up to five shared neighbors give context."""
    trimmed = context[:MAX_CONTEXT_NEIGHBORS]
    if trimmed:
        section = "\n\nConcepts neighboring both: " + "; ".join(trimmed) + "."
    else:
        section = ""
    return PROMPT_TEMPLATE.format(a=pair.a, b=pair.b, context_section=section)


def _dedupe(pairs: list[CandidatePair]) -> list[CandidatePair]:
    seen: set[tuple[str, str]] = set()
    unique = []
    for pair in pairs:
        key = (pair.a, pair.b)
        if key in seen:
            continue
        seen.add(key)
        unique.append(pair)
    return unique


def generate_hypotheses(
    pairs: list[CandidatePair],
    provider: Provider,
    budget: RateBudget,
    graph: CausalGraph,
    model_tag: str = "gpt-4",
    clock: Clock | None = None,
    created_at: str | None = None,
    failures: list[tuple[CandidatePair, Exception]] | None = None,
) -> list[Hypothesis]:
    """One hypothesis per unique pair; failures are isolated and reported.

    `created_at` stamps every record; leave it None for wall-clock time or fix
    it for reproducible artifacts.
    """
    if created_at is None:
        created_at = datetime.datetime.now(datetime.timezone.utc).isoformat()
    unique = _dedupe(pairs)
    limiter = RateLimiter(budget, clock)
    retry_rng = random.Random(0)
    hypotheses: list[Hypothesis] = []
    for ordinal, pair in enumerate(unique, start=1):
        prompt = build_hypothesis_prompt(pair, shared_neighbors(graph, pair.a, pair.b))
        request = ProviderRequest(
            prompt=prompt, token_estimate=token_estimate(prompt), model_tag=model_tag
        )

        def attempt(req=request):
            limiter.acquire(req.token_estimate)
            return provider.complete(req.prompt, model_tag=req.model_tag)

        try:
            statement = retry_with_backoff(attempt, clock=limiter.clock, rng=retry_rng)
        except ProviderExhausted as exc:
            logger.warning("hypothesis generation failed for (%s, %s): %s", pair.a, pair.b, exc)
            if failures is not None:
                failures.append((pair, exc))
            continue
        hypotheses.append(
            Hypothesis(
                id=f"h{ordinal:04d}",
                concept_a=pair.a,
                concept_b=pair.b,
                statement=statement,
                cosine=pair.cosine,
                jaccard=pair.jaccard if pair.jaccard is not None else 0.0,
                provider_tag=model_tag,
                created_at=created_at,
            )
        )
    return hypotheses


# --- artifact IO ------------------------------------------------------------


def save_hypotheses(hypotheses: list[Hypothesis], path: str) -> None:
    lines = [
        canonical_json(
            {
                "id": h.id,
                "concept_a": h.concept_a,
                "concept_b": h.concept_b,
                "statement": h.statement,
                "cosine": h.cosine,
                "jaccard": h.jaccard,
                "provider_tag": h.provider_tag,
                "created_at": h.created_at,
            }
        )
        for h in hypotheses
    ]
    atomic_write_text(path, "\n".join(lines) + ("\n" if lines else ""))


def load_hypotheses(path: str) -> list[Hypothesis]:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as exc:
        raise IoFailure(f"cannot read hypotheses {path}: {exc}") from exc
    out = []
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
            out.append(Hypothesis(**raw))
        except (json.JSONDecodeError, TypeError, ValueError) as exc:
            raise CorruptRecord(line_no, f"bad hypothesis record: {exc}") from exc
    return out
