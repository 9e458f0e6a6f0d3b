"""Sliding-window rate limiting for provider calls, with retries.

The limiter enforces two budgets at once: at most 60 requests and at most
150,000 estimated tokens inside any 60-second window of dispatch timestamps
(both configurable). Windows are half-open, so a dispatch exactly 60 s after
another never shares a window with it.

Time is injected through a tiny clock interface so tests drive a simulated
clock and the whole schedule is exact and instantaneous.
"""

from __future__ import annotations

import logging
import random
import threading
import time
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Protocol

from .errors import OversizeRequest, ProviderExhausted
from .providers import ProviderResponse

logger = logging.getLogger(__name__)

WINDOW_SECONDS = 60.0


@dataclass(frozen=True)
class RateBudget:
    max_requests_per_minute: int = 60
    max_tokens_per_minute: int = 150_000

    def __post_init__(self) -> None:
        if self.max_requests_per_minute <= 0 or self.max_tokens_per_minute <= 0:
            raise ValueError("rate budgets must be positive")


class Clock(Protocol):
    def now(self) -> float: ...

    def sleep(self, seconds: float) -> None: ...


class SystemClock:
    def now(self) -> float:
        return time.monotonic()

    def sleep(self, seconds: float) -> None:
        if seconds > 0:
            time.sleep(seconds)


class SimulatedClock:
    """Manual clock for tests; sleeping advances it instantly."""

    def __init__(self, start: float = 0.0):
        self._now = start

    def now(self) -> float:
        return self._now

    def sleep(self, seconds: float) -> None:
        if seconds > 0:
            self._now += seconds

    def advance(self, seconds: float) -> None:
        self._now += seconds


class RateLimiter:
    """Serializes dispatch decisions against both per-minute budgets.

    `acquire` blocks (via the clock) until the earliest instant at which
    sending the request keeps every 60 s window within budget, then records
    the dispatch and returns its timestamp.
    """

    def __init__(self, budget: RateBudget, clock: Clock | None = None):
        self.budget = budget
        self.clock = clock if clock is not None else SystemClock()
        self._sent: deque[tuple[float, int]] = deque()
        self._window_tokens = 0
        # One gatekeeper: concurrent producers serialize here, waiting while
        # the dispatch ahead of them sleeps off its delay.
        self._lock = threading.Lock()

    def _prune(self, now: float) -> None:
        while self._sent and self._sent[0][0] <= now - WINDOW_SECONDS:
            _, tokens = self._sent.popleft()
            self._window_tokens -= tokens

    def acquire(self, token_count: int) -> float:
        if token_count > self.budget.max_tokens_per_minute:
            raise OversizeRequest(
                f"request of {token_count} tokens exceeds the per-minute budget "
                f"of {self.budget.max_tokens_per_minute}"
            )
        with self._lock:
            target = self.clock.now()
            while True:
                self._prune(target)
                if len(self._sent) >= self.budget.max_requests_per_minute:
                    oldest_blocking = self._sent[
                        len(self._sent) - self.budget.max_requests_per_minute
                    ][0]
                    target = max(target, oldest_blocking + WINDOW_SECONDS)
                    continue
                if self._sent and self._window_tokens + token_count > self.budget.max_tokens_per_minute:
                    target = max(target, self._sent[0][0] + WINDOW_SECONDS)
                    continue
                break
            wait = target - self.clock.now()
            if wait > 0:
                self.clock.sleep(wait)
            dispatch_at = max(self.clock.now(), target)
            self._sent.append((dispatch_at, token_count))
            self._window_tokens += token_count
            return dispatch_at

    def dispatch_log(self) -> list[tuple[float, int]]:
        """Timestamps and token counts still inside the bookkeeping window."""
        with self._lock:
            return list(self._sent)


def retry_with_backoff(
    call: Callable[[], object],
    max_attempts: int = 3,
    base_delay: float = 1.0,
    clock: Clock | None = None,
    rng: random.Random | None = None,
):
    """Run `call`, retrying transient failures with jittered exponential backoff.

    Raises ProviderExhausted once `max_attempts` tries have all failed.
    """
    clock = clock if clock is not None else SystemClock()
    rng = rng if rng is not None else random.Random()
    last_error: Exception | None = None
    for attempt in range(max_attempts):
        try:
            return call()
        except Exception as exc:  # provider errors are opaque; retry them all
            last_error = exc
            if attempt + 1 < max_attempts:
                delay = base_delay * (2**attempt) * (1.0 + rng.random())
                logger.warning(
                    "provider call failed (attempt %d/%d): %s; retrying in %.2fs",
                    attempt + 1,
                    max_attempts,
                    exc,
                    delay,
                )
                clock.sleep(delay)
    raise ProviderExhausted(
        f"provider failed after {max_attempts} attempts: {last_error}",
        attempts=max_attempts,
    ) from last_error


def rate_limited_submit(
    requests: Iterable,
    budget: RateBudget,
    provider,
    clock: Clock | None = None,
    max_attempts: int = 3,
    retry_seed: int = 0,
) -> Iterator:
    """Send ProviderRequests through a shared limiter, yielding responses in order.

    Every attempt (including retries) consumes budget. Failures surface as
    ProviderExhausted after the retry policy is spent.
    """
    clock = clock if clock is not None else SystemClock()
    limiter = RateLimiter(budget, clock)
    rng = random.Random(retry_seed)
    for request in requests:
        if request.token_estimate > budget.max_tokens_per_minute:
            raise OversizeRequest(
                f"request of {request.token_estimate} tokens exceeds the per-minute "
                f"budget of {budget.max_tokens_per_minute}"
            )

        def attempt(req=request):
            limiter.acquire(req.token_estimate)
            return provider.complete(req.prompt, model_tag=req.model_tag)

        started = clock.now()
        raw_text = retry_with_backoff(
            attempt, max_attempts=max_attempts, clock=clock, rng=rng
        )
        yield ProviderResponse(
            raw_text=raw_text,
            model_tag=request.model_tag,
            latency=clock.now() - started,
        )
