"""Resilient provider transport: cache, retries and circuit breaking combined.

Call order per request: fresh cache hit wins outright; otherwise concurrent
misses on the same key coalesce, the provider breaker gates the fetch, the
fetch itself retries with jittered backoff, and a success populates both cache
layers. When the provider cannot be reached (breaker open or retries
exhausted) an expired entry is served flagged stale; with no entry at all the
call raises `Unavailable`.
"""

from __future__ import annotations

import json
import logging
import random
import time
from dataclasses import dataclass
from typing import Any, Callable

from ..errors import ProviderUnavailable, Unavailable
from ..geodata.transport import Transport, cache_key, provider_of
from .backoff import BackoffPolicy, backoff_delay
from .breaker import BreakerDecision, BreakerRegistry
from .cache import CachePolicy, Freshness, SingleFlight, TwoTierCache

logger = logging.getLogger("urbanscore.providers")


@dataclass(frozen=True)
class TransportResult:
    body: Any
    freshness: Freshness


def call_with_freshness(transport, op: str, params: dict) -> TransportResult:
    """Uniform entry point: plain transports count as live fetches."""
    if hasattr(transport, "call_ex"):
        return transport.call_ex(op, params)
    return TransportResult(transport.call(op, params), Freshness.LIVE)


class ResilientTransport:
    """Wraps a raw transport; implements the same `call` contract plus
    `call_ex`, which also reports how fresh the returned body is."""

    def __init__(
        self,
        inner: Transport,
        cache: TwoTierCache | None = None,
        cache_policy: CachePolicy | None = None,
        breakers: BreakerRegistry | None = None,
        backoff: BackoffPolicy | None = None,
        rng: Callable[[], float] = random.random,
        sleep: Callable[[float], None] = time.sleep,
        listener: Callable[[dict], None] | None = None,
        clock: Callable[[], float] = time.monotonic,
    ):
        self.inner = inner
        self.cache = cache or TwoTierCache(clock=clock)
        self.cache_policy = cache_policy or CachePolicy()
        self.breakers = breakers or BreakerRegistry(clock=clock)
        self.backoff = backoff or BackoffPolicy()
        self._rng = rng
        self._sleep = sleep
        self._listener = listener
        self._clock = clock
        self._flight = SingleFlight()

    def call(self, op: str, params: dict) -> Any:
        return self.call_ex(op, params).body

    def call_ex(self, op: str, params: dict) -> TransportResult:
        provider = provider_of(op)
        key = cache_key(op, params)
        started = self._clock()

        hit = self.cache.lookup(key)
        if hit is not None and hit.fresh:
            return self._done(op, provider, key, started, Freshness.CACHED, hit.value)

        with self._flight.lock(key):
            hit = self.cache.lookup(key)
            if hit is not None and hit.fresh:
                return self._done(op, provider, key, started, Freshness.CACHED, hit.value)
            stale = hit.value if hit is not None else None

            try:
                body = self._fetch(op, params, self.breakers.for_provider(provider))
            except (ProviderUnavailable, Unavailable):
                if stale is not None:
                    return self._done(op, provider, key, started, Freshness.STALE, stale)
                raise

            encoded = json.dumps(body).encode("utf-8")
            self.cache.store(key, encoded, self.cache_policy.ttl_for(provider))
            return self._done(op, provider, key, started, Freshness.LIVE, encoded)

    def _fetch(self, op: str, params: dict, breaker) -> Any:
        """Breaker-gated retry loop. Every upstream attempt reports its outcome,
        so the threshold-th consecutive failed attempt trips the breaker; a
        probe admitted in half-open state gets exactly one attempt because a
        failed probe re-opens the breaker and the next allow() denies."""
        last_exc: Exception | None = None
        for attempt in range(1, self.backoff.max_attempts + 1):
            decision = breaker.allow()
            if decision == BreakerDecision.DENY:
                if last_exc is not None:
                    raise last_exc
                raise Unavailable(f"{provider_of(op)} circuit open for {op}")
            try:
                body = self.inner.call(op, params)
            except ProviderUnavailable as exc:
                breaker.record(False)
                last_exc = exc
                if attempt < self.backoff.max_attempts:
                    self._sleep(backoff_delay(attempt, self.backoff, self._rng()))
                continue
            breaker.record(True)
            return body
        raise last_exc

    def _done(self, op, provider, key, started, freshness, encoded: bytes) -> TransportResult:
        elapsed_ms = (self._clock() - started) * 1000.0
        event = {
            "op": op,
            "provider": provider,
            "key": key,
            "freshness": freshness.value,
            "latency_ms": round(elapsed_ms, 3),
            "breaker": self.breakers.for_provider(provider).state.phase.value,
        }
        logger.info("provider_call %s", event)
        if self._listener is not None:
            self._listener(event)
        return TransportResult(json.loads(encoded.decode("utf-8")), freshness)
