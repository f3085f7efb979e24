"""Cache, backoff and circuit-breaking around every provider call."""

from .backoff import BackoffPolicy, backoff_delay, call_with_retries
from .breaker import (
    BreakerDecision,
    BreakerPhase,
    BreakerPolicy,
    BreakerRegistry,
    BreakerState,
    CircuitBreaker,
    breaker_allow,
    breaker_on_result,
)
from .cache import (
    CachePolicy,
    CacheStore,
    Freshness,
    MemoryCacheStore,
    SingleFlight,
    TwoTierCache,
)
from .wrapper import ResilientTransport, TransportResult, call_with_freshness

__all__ = [
    "BackoffPolicy",
    "backoff_delay",
    "call_with_retries",
    "BreakerDecision",
    "BreakerPhase",
    "BreakerPolicy",
    "BreakerRegistry",
    "BreakerState",
    "CircuitBreaker",
    "breaker_allow",
    "breaker_on_result",
    "CachePolicy",
    "CacheStore",
    "Freshness",
    "MemoryCacheStore",
    "SingleFlight",
    "TwoTierCache",
    "ResilientTransport",
    "TransportResult",
    "call_with_freshness",
]
