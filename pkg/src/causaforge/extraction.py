"""Causal assertion extraction: prompts, tolerant response parsing, validation.

Model responses embed JSON in prose and frequently bend the grammar (single
quotes, bare tokens, stray members, trailing commas), so parsing happens in
two passes: strict JSON first, then a balanced-brace scan with per-field
recovery. Concepts are normalized before they reach the graph: Unicode NFC,
lowercase, whitespace collapsed, punctuation trimmed from the ends.
"""

from __future__ import annotations

import json
import logging
import re
import unicodedata
from dataclasses import dataclass, replace
from enum import Enum

from .corpus import TextChunk, token_estimate
from .errors import CorruptRecord, IoFailure, ParseFailure
from .ioutil import atomic_write_text, canonical_json
from .providers import Provider, ProviderRequest
from .ratelimit import Clock, RateBudget, rate_limited_submit

logger = logging.getLogger(__name__)


class Relationship(str, Enum):
    CAUSALITY = "causality"
    CORRELATION = "correlation"


class Polarity(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    NONE = "none"


_STRIP_CHARS = (
    "".join(chr(c) for c in range(0x21, 0x30))
    + ":;<=>?@[\\]^_`{|}~"
    + "“”‘’«»–—…·´¨"
    + " \t\r\n "
)


def normalize_concept(text: str) -> str:
    """Canonical concept id: NFC, lowercase, single spaces, bare of edge punctuation.

    Applied to a fixpoint so that normalizing an already-normalized id is the
    identity.
    """
    current = text
    previous = None
    while current != previous:
        previous = current
        current = unicodedata.normalize("NFC", current).lower()
        current = re.sub(r"\s+", " ", current)
        current = current.strip(_STRIP_CHARS)
    return current


@dataclass(frozen=True)
class CausalAssertion:
    """One extracted (cause, effect) claim with provenance."""

    cause: str
    effect: str
    relationship: Relationship
    polarity: Polarity
    source_doc: str
    chunk_index: int

    def __post_init__(self) -> None:
        if not self.cause or not self.effect:
            raise ValueError("concepts must be non-empty")
        if self.cause != normalize_concept(self.cause) or self.effect != normalize_concept(self.effect):
            raise ValueError("concepts must be normalized")
        if self.cause == self.effect:
            raise ValueError("cause and effect must differ")
        if self.relationship is Relationship.CORRELATION and self.polarity is not Polarity.NONE:
            raise ValueError("correlation assertions carry no polarity")


@dataclass(frozen=True)
class RawAssertion:
    """Parsed but not yet validated relationship claim."""

    cause: str
    effect: str
    relationship: str
    polarity: str | None
    source_doc: str
    chunk_index: int


class RejectionReason(str, Enum):
    EMPTY_CONCEPT = "empty_concept"
    SELF_LOOP = "self_loop"
    BAD_ENUM = "bad_enum"


@dataclass(frozen=True)
class Rejection:
    reason: RejectionReason
    detail: str
    raw: RawAssertion


PROMPT_TEMPLATE = """From the “text” below, extract the key causal and correlational relationships described directly in the given text by analyzing reasoning and evidence within the text. Exclude any relationships that are attributed to or cited from other research studies.

Format the relationships in JSON format with the following fields:

'concept_pair': A list representation of the cause and effect concepts in the relationship, in [cause, effect] order.

'relationship': 'causality' or 'correlation' indicating the type of relationship.

'positive/negative': If the extracted relationship is causality, indicate whether it's a positive or negative causality relationship. If it's a correlation relationship, reply as None.

Document: {doc_id}
Text:
{text}"""


def build_extraction_prompt(chunk: TextChunk) -> str:
    """Render the fixed extraction directive around one chunk of article text."""
    if not chunk.text:
        raise ValueError("cannot build a prompt for an empty chunk")
    return PROMPT_TEMPLATE.format(doc_id=chunk.doc_id, text=chunk.text)


def extraction_request(chunk: TextChunk, model_tag: str = "gpt-4") -> ProviderRequest:
    prompt = build_extraction_prompt(chunk)
    return ProviderRequest(prompt=prompt, token_estimate=token_estimate(prompt), model_tag=model_tag)


def _scan_object_regions(text: str) -> list[str]:
    """Return every balanced top-level {...} region, quote-aware."""
    regions = []
    depth = 0
    start = -1
    quote: str | None = None
    escaped = False
    for i, char in enumerate(text):
        if quote is not None:
            if escaped:
                escaped = False
            elif char == "\\":
                escaped = True
            elif char == quote:
                quote = None
            continue
        if char in "\"'" and depth > 0:
            quote = char
        elif char == "{":
            if depth == 0:
                start = i
            depth += 1
        elif char == "}" and depth > 0:
            depth -= 1
            if depth == 0:
                regions.append(text[start : i + 1])
    return regions


def _clean_item(item: str) -> str:
    return item.strip().strip("\"'").strip()


_CONCEPT_PAIR_RE = re.compile(r"['\"]?concept_pair['\"]?\s*:\s*\[(.*?)\]", re.DOTALL)
_RELATIONSHIP_RE = re.compile(r"['\"]?relationship['\"]?\s*:\s*['\"]?([A-Za-z]+)['\"]?")
_POLARITY_RE = re.compile(
    r"['\"]?(?:positive/negative|polarity)['\"]?\s*:\s*['\"]?(None|null|[A-Za-z]+)['\"]?",
    re.IGNORECASE,
)


def _object_from_region(region: str) -> dict | None:
    try:
        strict = json.loads(region)
        if isinstance(strict, dict):
            return strict
    except json.JSONDecodeError:
        pass
    recovered: dict = {}
    pair = _CONCEPT_PAIR_RE.search(region)
    if pair:
        items = [_clean_item(p) for p in pair.group(1).split(",")]
        recovered["concept_pair"] = [p for p in items if p]
    relationship = _RELATIONSHIP_RE.search(region)
    if relationship:
        recovered["relationship"] = relationship.group(1)
    polarity = _POLARITY_RE.search(region)
    if polarity:
        recovered["positive/negative"] = polarity.group(1)
    return recovered or None


def _raw_from_object(obj: dict, source_doc: str, chunk_index: int) -> RawAssertion | None:
    pair = obj.get("concept_pair")
    relationship = obj.get("relationship")
    if not isinstance(pair, (list, tuple)) or len(pair) != 2 or not isinstance(relationship, str):
        return None
    cause, effect = pair
    if not isinstance(cause, str) or not isinstance(effect, str):
        return None
    polarity = obj.get("positive/negative", obj.get("polarity"))
    if polarity is not None and not isinstance(polarity, str):
        polarity = str(polarity)
    return RawAssertion(
        cause=cause,
        effect=effect,
        relationship=relationship,
        polarity=polarity,
        source_doc=source_doc,
        chunk_index=chunk_index,
    )


def normalize_and_validate(raw: RawAssertion) -> CausalAssertion | Rejection:
    """Normalize concept strings and enforce the assertion invariants.

    Correlation claims with a polarity are coerced to polarity "none" (the
    directive asks the model to reply None there); everything else that breaks
    an invariant comes back as a Rejection with a machine-readable reason.
    """
    cause = normalize_concept(raw.cause)
    effect = normalize_concept(raw.effect)
    if not cause or not effect:
        return Rejection(RejectionReason.EMPTY_CONCEPT, "concept empty after normalization", raw)
    if cause == effect:
        return Rejection(RejectionReason.SELF_LOOP, f"cause equals effect: {cause!r}", raw)

    relationship_text = raw.relationship.strip().lower()
    try:
        relationship = Relationship(relationship_text)
    except ValueError:
        return Rejection(RejectionReason.BAD_ENUM, f"unknown relationship {raw.relationship!r}", raw)

    polarity_text = (raw.polarity or "none").strip().lower()
    if polarity_text in ("", "null", "none"):
        polarity = Polarity.NONE
    else:
        try:
            polarity = Polarity(polarity_text)
        except ValueError:
            return Rejection(RejectionReason.BAD_ENUM, f"unknown polarity {raw.polarity!r}", raw)

    if relationship is Relationship.CORRELATION and polarity is not Polarity.NONE:
        logger.warning(
            "correlation (%s -> %s) arrived with polarity %r; coercing to none",
            cause,
            effect,
            raw.polarity,
        )
        polarity = Polarity.NONE

    return CausalAssertion(
        cause=cause,
        effect=effect,
        relationship=relationship,
        polarity=polarity,
        source_doc=raw.source_doc,
        chunk_index=raw.chunk_index,
    )


def parse_response(raw_text: str, source_doc: str, chunk_index: int) -> list[CausalAssertion]:
    """Recover relationship objects from a model response, however wrapped.

    Raises ParseFailure when a non-empty response contains no recognizable
    object at all; objects that merely lack required fields or fail validation
    are skipped (and logged), not fatal.
    """
    if not raw_text.strip():
        return []

    objects: list[dict] = []
    try:
        strict = json.loads(raw_text)
        if isinstance(strict, dict):
            objects = [strict]
        elif isinstance(strict, list):
            objects = [o for o in strict if isinstance(o, dict)]
    except json.JSONDecodeError:
        pass
    if not objects:
        recovered = [_object_from_region(r) for r in _scan_object_regions(raw_text)]
        objects = [o for o in recovered if o]

    if not objects:
        raise ParseFailure(
            f"no relationship objects recovered from response for {source_doc} "
            f"chunk {chunk_index}"
        )

    assertions: list[CausalAssertion] = []
    skipped = 0
    for obj in objects:
        raw = _raw_from_object(obj, source_doc, chunk_index)
        if raw is None:
            skipped += 1
            continue
        result = normalize_and_validate(raw)
        if isinstance(result, Rejection):
            skipped += 1
            logger.info("skipping assertion (%s): %s", result.reason.value, result.detail)
            continue
        assertions.append(result)
    if skipped:
        logger.info(
            "parse_response: %d object(s) skipped for %s chunk %d",
            skipped,
            source_doc,
            chunk_index,
        )
    return assertions


def serialize_assertions(assertions: list[CausalAssertion]) -> str:
    """Strict-JSON form of a response carrying the given assertions."""
    payload = [
        {
            "concept_pair": [a.cause, a.effect],
            "relationship": a.relationship.value,
            "positive/negative": "None" if a.polarity is Polarity.NONE else a.polarity.value,
        }
        for a in assertions
    ]
    return json.dumps(payload, indent=2, ensure_ascii=False)


def extract_from_chunks(
    chunks: list[TextChunk],
    provider: Provider,
    budget: RateBudget,
    model_tag: str = "gpt-4",
    clock: Clock | None = None,
) -> tuple[list[CausalAssertion], int]:
    """Run the extraction stage over chunks; returns (assertions, parse_failures)."""
    requests = [extraction_request(c, model_tag) for c in chunks if c.text.strip()]
    usable = [c for c in chunks if c.text.strip()]
    assertions: list[CausalAssertion] = []
    failures = 0
    responses = rate_limited_submit(requests, budget, provider, clock=clock)
    for chunk, response in zip(usable, responses):
        try:
            assertions.extend(parse_response(response.raw_text, chunk.doc_id, chunk.index))
        except ParseFailure as exc:
            failures += 1
            logger.info("%s", exc)
    return assertions, failures


# --- optional directionality verification pass -----------------------------

VERIFICATION_TEMPLATE = """Assess the following extracted relationship for correctness, paying particular attention to the direction of causality.

cause: {cause}
effect: {effect}
relationship: {relationship}

Answer in JSON format as {{"verdict": "yes"}} if the relationship and its direction are correct, {{"verdict": "flip"}} if the relationship holds but the direction is reversed, or {{"verdict": "no"}} if there is no such relationship."""

_VERDICT_RE = re.compile(r"['\"]?verdict['\"]?\s*:\s*['\"]?(yes|no|flip)['\"]?", re.IGNORECASE)


def build_verification_prompt(assertion: CausalAssertion) -> str:
    return VERIFICATION_TEMPLATE.format(
        cause=assertion.cause,
        effect=assertion.effect,
        relationship=assertion.relationship.value,
    )


def parse_verdict(raw_text: str) -> str:
    match = _VERDICT_RE.search(raw_text)
    if not match:
        bare = raw_text.strip().lower()
        if bare in ("yes", "no", "flip"):
            return bare
        raise ParseFailure(f"no verdict in response: {raw_text[:80]!r}")
    return match.group(1).lower()


def verify_assertions(
    assertions: list[CausalAssertion],
    provider: Provider,
    budget: RateBudget,
    model_tag: str = "gpt-4",
    clock: Clock | None = None,
) -> list[CausalAssertion]:
    """Second-pass screening: keep, drop, or flip each assertion per the verdict."""
    requests = [
        ProviderRequest(
            prompt=build_verification_prompt(a),
            token_estimate=token_estimate(build_verification_prompt(a)),
            model_tag=model_tag,
        )
        for a in assertions
    ]
    kept: list[CausalAssertion] = []
    responses = rate_limited_submit(requests, budget, provider, clock=clock)
    for assertion, response in zip(assertions, responses):
        try:
            verdict = parse_verdict(response.raw_text)
        except ParseFailure:
            verdict = "yes"  # unverifiable responses leave the assertion alone
        if verdict == "yes":
            kept.append(assertion)
        elif verdict == "flip":
            kept.append(replace(assertion, cause=assertion.effect, effect=assertion.cause))
    return kept


# --- artifact IO ------------------------------------------------------------


def save_assertions(assertions: list[CausalAssertion], path: str) -> None:
    lines = [
        canonical_json(
            {
                "cause": a.cause,
                "effect": a.effect,
                "relationship": a.relationship.value,
                "polarity": a.polarity.value,
                "source_doc": a.source_doc,
                "chunk_index": a.chunk_index,
            }
        )
        for a in assertions
    ]
    atomic_write_text(path, "\n".join(lines) + ("\n" if lines else ""))


def load_assertions(path: str) -> list[CausalAssertion]:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as exc:
        raise IoFailure(f"cannot read assertions {path}: {exc}") from exc
    out = []
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
            out.append(
                CausalAssertion(
                    cause=raw["cause"],
                    effect=raw["effect"],
                    relationship=Relationship(raw["relationship"]),
                    polarity=Polarity(raw["polarity"]),
                    source_doc=raw["source_doc"],
                    chunk_index=raw["chunk_index"],
                )
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise CorruptRecord(line_no, f"bad assertion record: {exc}") from exc
    return out
