"""Exception types shared across the causaforge pipeline.

Every error that crosses a module boundary lives here so callers can catch
by name without importing the module that raised it.
"""

from __future__ import annotations


class CausaforgeError(Exception):
    """Base class for all causaforge errors."""


# --- extraction ---------------------------------------------------------


class ParseFailure(CausaforgeError):
    """No relationship objects could be recovered from a non-empty response."""


class OversizeRequest(CausaforgeError):
    """A single request exceeds the per-minute token budget and can never run."""


class ProviderExhausted(CausaforgeError):
    """Provider call failed after all retry attempts."""

    def __init__(self, message: str, attempts: int = 0):
        super().__init__(message)
        self.attempts = attempts


# --- graph ---------------------------------------------------------------


class UnknownConcept(CausaforgeError):
    """Queried concept id is not a node of the graph."""

    def __init__(self, concept: str):
        super().__init__(f"unknown concept: {concept!r}")
        self.concept = concept


class IoFailure(CausaforgeError):
    """File could not be read or written."""


class CorruptRecord(CausaforgeError):
    """A persisted line failed to decode."""

    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class InvariantViolation(CausaforgeError):
    """A loaded graph breaks a structural invariant."""


# --- embedding -----------------------------------------------------------


class DegenerateCorpus(CausaforgeError):
    """Walk corpus yields zero (center, context) training pairs."""


class ZeroVector(CausaforgeError):
    """Cosine similarity is undefined for a zero-length vector."""


class MissingEmbedding(CausaforgeError):
    """A graph node has no vector in the embedding table."""

    def __init__(self, concept: str):
        super().__init__(f"no embedding for concept: {concept!r}")
        self.concept = concept


# --- evaluation statistics ------------------------------------------------


class ZeroVariance(CausaforgeError):
    """A reviewer's ratings are constant; z-scores are undefined."""

    def __init__(self, reviewer: str, dimension: str):
        super().__init__(f"zero variance for reviewer {reviewer!r}, dimension {dimension!r}")
        self.reviewer = reviewer
        self.dimension = dimension


class InsufficientData(CausaforgeError):
    """Too few groups or samples for the requested test."""


class LengthMismatch(CausaforgeError):
    """Paired samples have different lengths."""


class DegenerateRanks(CausaforgeError):
    """All values tie in one variable; rank correlation is undefined."""


class DimensionMismatch(CausaforgeError):
    """Vectors of different lengths were mixed."""


class PerplexityTooLarge(CausaforgeError):
    """Projection perplexity must be below (n - 1) / 3."""


class WindowTooLarge(CausaforgeError):
    """Moving-average window exceeds the series length."""
