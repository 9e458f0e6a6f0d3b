"""LLM provider interface: a real HTTP client and a deterministic mock.

Wire protocol (chat-completions compatible):

    POST <endpoint>
    Authorization: Bearer $API_KEY        (key read from an env variable)
    {"model": "<tag>", "messages": [{"role": "user", "content": "<prompt>"}]}

    response: {"choices": [{"message": {"content": "<text>"}}]}

The mock provider makes the whole pipeline runnable offline and byte-for-byte
reproducible. It first consults a fixture directory of content-hash-named text
files (sha256 of the prompt), then falls back to a rule-based synthesizer that
reads the prompt like the real model would: extraction prompts get a JSON list
of relationships pattern-matched from the embedded text, hypothesis prompts
get a templated statement naming both concepts.
"""

from __future__ import annotations

import hashlib
import os
import re
from dataclasses import dataclass
from typing import Protocol

import requests


@dataclass(frozen=True)
class ProviderRequest:
    prompt: str
    token_estimate: int
    model_tag: str = "gpt-4"

    def __post_init__(self) -> None:
        if self.token_estimate <= 0:
            raise ValueError("token_estimate must be positive")


@dataclass(frozen=True)
class ProviderResponse:
    raw_text: str
    model_tag: str
    latency: float = 0.0


class Provider(Protocol):
    def complete(self, prompt: str, model_tag: str = "gpt-4") -> str: ...


class HttpProvider:
    """Minimal chat-completions client over the documented wire protocol."""

    def __init__(
        self,
        endpoint: str,
        api_key_env: str = "CAUSAFORGE_API_KEY",
        timeout: float = 120.0,
        session: requests.Session | None = None,
    ):
        self.endpoint = endpoint
        self.api_key_env = api_key_env
        self.timeout = timeout
        self.session = session or requests.Session()

    def complete(self, prompt: str, model_tag: str = "gpt-4") -> str:
        headers = {"Content-Type": "application/json"}
        api_key = os.environ.get(self.api_key_env)
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        response = self.session.post(
            self.endpoint,
            json={"model": model_tag, "messages": [{"role": "user", "content": prompt}]},
            headers=headers,
            timeout=self.timeout,
        )
        response.raise_for_status()
        payload = response.json()
        return payload["choices"][0]["message"]["content"]


def prompt_fingerprint(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


def store_fixture(fixture_dir: str, prompt: str, response_text: str) -> str:
    """Persist a canned response for a prompt; returns the fixture path."""
    os.makedirs(fixture_dir, exist_ok=True)
    path = os.path.join(fixture_dir, prompt_fingerprint(prompt) + ".txt")
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(response_text)
    return path


_POSITIVE_VERBS = "improves?|enhances?|increases?|boosts?|promotes?|strengthens?|fosters?"
_NEGATIVE_VERBS = "reduces?|decreases?|impairs?|lowers?|undermines?|diminishes?|weakens?"
_CORRELATION_VERBS = "correlates? with|is associated with|are associated with|co-occurs? with"

_RELATION_SENTENCE = re.compile(
    rf"(?m)^\s*([A-Za-z][A-Za-z \-']*?)\s+"
    rf"({_POSITIVE_VERBS}|{_NEGATIVE_VERBS}|{_CORRELATION_VERBS})\s+"
    rf"([A-Za-z][A-Za-z \-']*?)\s*[.?!]"
)


class MockProvider:
    """Offline stand-in for the real model. Same prompt, same bytes, always."""

    model_tag = "mock"

    def __init__(self, fixture_dir: str | None = None, synthesize: bool = True):
        self.fixture_dir = fixture_dir
        self.synthesize = synthesize
        self.calls = 0

    def complete(self, prompt: str, model_tag: str = "mock") -> str:
        self.calls += 1
        if self.fixture_dir:
            path = os.path.join(self.fixture_dir, prompt_fingerprint(prompt) + ".txt")
            if os.path.exists(path):
                with open(path, "r", encoding="utf-8") as handle:
                    return handle.read()
        if not self.synthesize:
            raise KeyError(f"no fixture for prompt {prompt_fingerprint(prompt)[:12]}...")
        return self._synthesize(prompt)

    def _synthesize(self, prompt: str) -> str:
        if "Format the relationships in JSON format" in prompt:
            return self._synthesize_extraction(prompt)
        if "single testable causal hypothesis" in prompt:
            return self._synthesize_hypothesis(prompt)
        if '"verdict"' in prompt:
            return '{"verdict": "yes"}'
        return "I found no relationships."

    def _synthesize_extraction(self, prompt: str) -> str:
        marker = "Text:\n"
        body = prompt[prompt.rfind(marker) + len(marker):] if marker in prompt else prompt
        # Split clauses so each "A <verb> B." match stays inside one claim.
        clauses = re.split(r"(?<=[.?!])\s+|\n+|,\s+(?:and|while|whereas)\s+", body)
        objects = []
        for clause in clauses:
            match = _RELATION_SENTENCE.search(clause.strip() + ".")
            if not match:
                continue
            cause, verb, effect = match.group(1), match.group(2), match.group(3)
            if re.fullmatch(_CORRELATION_VERBS, verb):
                relationship, polarity = "correlation", "None"
            elif re.fullmatch(_NEGATIVE_VERBS, verb):
                relationship, polarity = "causality", "negative"
            else:
                relationship, polarity = "causality", "positive"
            objects.append(
                '  {"concept_pair": ["%s", "%s"], "relationship": "%s", '
                '"positive/negative": "%s"}' % (cause.strip(), effect.strip(), relationship, polarity)
            )
        if not objects:
            return "I found no relationships."
        return "Here are the extracted relationships:\n[\n" + ",\n".join(objects) + "\n]"

    def _synthesize_hypothesis(self, prompt: str) -> str:
        concept_a = re.search(r"(?m)^Concept A: (.+)$", prompt)
        concept_b = re.search(r"(?m)^Concept B: (.+)$", prompt)
        a = concept_a.group(1).strip() if concept_a else "the first concept"
        b = concept_b.group(1).strip() if concept_b else "the second concept"
        return (
            f"Interventions that raise {a} are hypothesized to causally enhance {b}; "
            f"the effect should persist after controlling for shared antecedents of "
            f"{a} and {b}."
        )
