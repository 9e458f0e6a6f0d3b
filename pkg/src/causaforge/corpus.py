"""Corpus ingestion: relevance filtering, reference stripping, chunking.

Documents arrive as JSON Lines (one record per line, UTF-8). Body text is cleaned
by cutting everything from the final standalone reference heading onward, then
segmented into chunks whose estimated token count stays under a budget. Chunks
concatenate back to the cleaned text byte-for-byte, so nothing is ever lost or
duplicated between chunk boundaries.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass

from .errors import CorruptRecord, IoFailure
from .ioutil import atomic_write_text, canonical_json

# Standalone heading that starts a reference list. Accepts an optional
# numbering prefix ("6.", "IV)") and trailing punctuation, on a line of its own.
_REFERENCE_HEADING = re.compile(
    r"^[ \t]*(?:(?:\d{1,3}|[ivxlc]{1,7})[.):\-]?[ \t]+)?"
    r"(?:references?|bibliography)[ \t]*[:.\-]*[ \t]*$",
    re.IGNORECASE,
)

_SENTENCE_BOUNDARY = re.compile(r"(?<=[.?!] )")
_PARAGRAPH_BOUNDARY = re.compile(r"(?<=\n\n)")


@dataclass(frozen=True)
class DocumentRecord:
    """One article: identifier, descriptive metadata, and full body text."""

    doc_id: str
    title: str
    abstract: str
    journal: str
    year: int
    body_text: str = ""

    def __post_init__(self) -> None:
        if not self.doc_id:
            raise ValueError("doc_id must be non-empty")
        if not 1800 <= self.year <= 2100:
            raise ValueError(f"year out of range: {self.year}")


@dataclass(frozen=True)
class FilterCriteria:
    """Substring relevance filter over title, abstract, and journal.

    Keywords are stored lowercase and matched case-insensitively; the optional
    journal term additionally restricts the journal name.
    """

    keywords: tuple[str, ...] = ()
    journal_required_term: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "keywords", tuple(k.lower() for k in self.keywords))
        if not self.keywords and not self.journal_required_term:
            raise ValueError("criteria need at least one keyword or a journal term")


@dataclass(frozen=True)
class TextChunk:
    """A contiguous slice of a document's cleaned body text."""

    doc_id: str
    index: int
    text: str
    token_estimate: int


def token_estimate(text: str) -> int:
    """Estimated token count: ceil(UTF-8 bytes / 4).

    Deterministic and tokenizer-free; conservative for English prose.
    """
    return math.ceil(len(text.encode("utf-8")) / 4)


def filter_documents(
    docs: list[DocumentRecord], criteria: FilterCriteria
) -> list[DocumentRecord]:
    """Keep documents matching the criteria, preserving input order.

    A document passes when any keyword occurs (case-insensitive substring) in
    its title, abstract, or journal, and, if a journal term is set, the journal
    name contains that term as well. With no keywords, the journal term alone
    decides.
    """
    kept = []
    for doc in docs:
        haystack = f"{doc.title}\n{doc.abstract}\n{doc.journal}".lower()
        if criteria.keywords and not any(k in haystack for k in criteria.keywords):
            continue
        term = criteria.journal_required_term
        if term is not None and term.lower() not in doc.journal.lower():
            continue
        kept.append(doc)
    return kept


def strip_references(text: str) -> str:
    """Cut the reference section: drop the last standalone heading line and all
    text after it. Text without such a heading is returned unchanged.

    Mentions of "references" inside a sentence never trigger the cut; the
    heading must occupy a whole line by itself.
    """
    cut_at = None
    offset = 0
    for line in text.splitlines(keepends=True):
        stripped = line.rstrip("\r\n")
        if _REFERENCE_HEADING.match(stripped):
            cut_at = offset
        offset += len(line)
    if cut_at is None:
        return text
    return text[:cut_at]


def _split_paragraphs(text: str) -> list[str]:
    """Split after blank lines, keeping separators attached to the left piece."""
    return [p for p in _PARAGRAPH_BOUNDARY.split(text) if p]


def _split_sentences(text: str) -> list[str]:
    """Split after '. ', '? ', '! ', keeping the delimiter with its sentence."""
    return [s for s in _SENTENCE_BOUNDARY.split(text) if s]


def _split_characters(text: str, max_bytes: int) -> list[str]:
    pieces = []
    current: list[str] = []
    current_bytes = 0
    for char in text:
        char_bytes = len(char.encode("utf-8"))
        if current and current_bytes + char_bytes > max_bytes:
            pieces.append("".join(current))
            current = []
            current_bytes = 0
        current.append(char)
        current_bytes += char_bytes
    if current:
        pieces.append("".join(current))
    return pieces


def chunk_text(text: str, doc_id: str = "", max_tokens: int = 4000) -> list[TextChunk]:
    """Greedily pack text into chunks of at most `max_tokens` estimated tokens.

    Preferred split points are paragraph breaks, then sentence ends, then raw
    character boundaries, so individual claims stay intact wherever the budget
    allows. Joining the chunk texts in index order reproduces `text` exactly.
    """
    if max_tokens < 1:
        raise ValueError("max_tokens must be >= 1")
    if not text:
        return []

    max_bytes = 4 * max_tokens

    pieces: list[str] = []
    for paragraph in _split_paragraphs(text):
        if len(paragraph.encode("utf-8")) <= max_bytes:
            pieces.append(paragraph)
            continue
        for sentence in _split_sentences(paragraph):
            if len(sentence.encode("utf-8")) <= max_bytes:
                pieces.append(sentence)
            else:
                pieces.extend(_split_characters(sentence, max_bytes))

    chunks: list[TextChunk] = []
    current: list[str] = []
    current_bytes = 0
    for piece in pieces:
        piece_bytes = len(piece.encode("utf-8"))
        if current and current_bytes + piece_bytes > max_bytes:
            joined = "".join(current)
            chunks.append(TextChunk(doc_id, len(chunks), joined, token_estimate(joined)))
            current = []
            current_bytes = 0
        current.append(piece)
        current_bytes += piece_bytes
    if current:
        joined = "".join(current)
        chunks.append(TextChunk(doc_id, len(chunks), joined, token_estimate(joined)))
    return chunks


def load_corpus(path: str) -> list[DocumentRecord]:
    """Read a JSON Lines corpus file.

    Unknown keys are ignored; a missing body_text is treated as the empty
    string. Blank lines are skipped.
    """
    try:
        with open(path, "r", encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as exc:
        raise IoFailure(f"cannot read corpus {path}: {exc}") from exc

    records = []
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorruptRecord(line_no, f"invalid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise CorruptRecord(line_no, "expected a JSON object")
        try:
            records.append(
                DocumentRecord(
                    doc_id=raw["doc_id"],
                    title=raw.get("title", ""),
                    abstract=raw.get("abstract", ""),
                    journal=raw.get("journal", ""),
                    year=int(raw["year"]),
                    body_text=raw.get("body_text", "") or "",
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise CorruptRecord(line_no, f"bad document record: {exc}") from exc
    seen: set[str] = set()
    for record in records:
        if record.doc_id in seen:
            raise CorruptRecord(0, f"duplicate doc_id {record.doc_id!r}")
        seen.add(record.doc_id)
    return records


def save_chunks(chunks: list[TextChunk], path: str) -> None:
    lines = [
        canonical_json(
            {
                "doc_id": c.doc_id,
                "index": c.index,
                "text": c.text,
                "token_estimate": c.token_estimate,
            }
        )
        for c in chunks
    ]
    atomic_write_text(path, "\n".join(lines) + ("\n" if lines else ""))


def load_chunks(path: str) -> list[TextChunk]:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as exc:
        raise IoFailure(f"cannot read chunks {path}: {exc}") from exc
    chunks = []
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
            chunks.append(
                TextChunk(raw["doc_id"], raw["index"], raw["text"], raw["token_estimate"])
            )
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise CorruptRecord(line_no, f"bad chunk record: {exc}") from exc
    return chunks
