"""Per-provider circuit breaker: Closed / Open / HalfOpen with a single probe.

The transition rules live in pure functions over an immutable state value so
they can be model-checked exhaustively; `CircuitBreaker` adds the lock and the
clock for runtime use.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable


class BreakerPhase(str, Enum):
    CLOSED = "closed"
    OPEN = "open"
    HALF_OPEN = "half_open"


class BreakerDecision(str, Enum):
    ALLOW = "allow"
    ALLOW_PROBE = "allow_probe"
    DENY = "deny"


@dataclass(frozen=True)
class BreakerPolicy:
    failure_threshold: int = 3
    open_duration_s: float = 60.0

    def __post_init__(self) -> None:
        if self.failure_threshold < 1 or self.open_duration_s <= 0:
            raise ValueError("invalid breaker policy")


@dataclass(frozen=True)
class BreakerState:
    phase: BreakerPhase = BreakerPhase.CLOSED
    consecutive_failures: int = 0
    opened_at: float | None = None  # present iff phase != CLOSED
    probe_in_flight: bool = False


def breaker_on_result(
    state: BreakerState, success: bool, now: float, policy: BreakerPolicy
) -> BreakerState:
    """Fold one call outcome into the state machine.

    Closed: success resets the failure run, the threshold-th consecutive
    failure trips to Open. HalfOpen: the probe outcome closes or re-opens
    (refreshing opened_at). Outcomes that straggle in while Open (admitted
    before the trip) leave the state untouched; the cooldown clock is owned
    by the trip event.
    """
    if state.phase == BreakerPhase.CLOSED:
        if success:
            return replace(state, consecutive_failures=0)
        failures = state.consecutive_failures + 1
        if failures >= policy.failure_threshold:
            return BreakerState(
                phase=BreakerPhase.OPEN, consecutive_failures=failures, opened_at=now
            )
        return replace(state, consecutive_failures=failures)

    if state.phase == BreakerPhase.HALF_OPEN:
        if success:
            return BreakerState(phase=BreakerPhase.CLOSED)
        return BreakerState(
            phase=BreakerPhase.OPEN,
            consecutive_failures=state.consecutive_failures,
            opened_at=now,
        )

    return state  # OPEN: stragglers don't move the machine


def breaker_allow(
    state: BreakerState, now: float, policy: BreakerPolicy
) -> tuple[BreakerDecision, BreakerState]:
    """Gate one prospective call; may advance Open -> HalfOpen (probe claimed)."""
    if state.phase == BreakerPhase.CLOSED:
        return BreakerDecision.ALLOW, state

    if state.phase == BreakerPhase.OPEN:
        if now - (state.opened_at or 0.0) < policy.open_duration_s:
            return BreakerDecision.DENY, state
        probe_state = BreakerState(
            phase=BreakerPhase.HALF_OPEN,
            consecutive_failures=state.consecutive_failures,
            opened_at=state.opened_at,
            probe_in_flight=True,
        )
        return BreakerDecision.ALLOW_PROBE, probe_state

    # HALF_OPEN
    if state.probe_in_flight:
        return BreakerDecision.DENY, state
    return BreakerDecision.ALLOW_PROBE, replace(state, probe_in_flight=True)


class CircuitBreaker:
    """Thread-safe wrapper; transitions are atomic under one lock."""

    def __init__(self, policy: BreakerPolicy | None = None,
                 clock: Callable[[], float] = time.monotonic):
        self.policy = policy or BreakerPolicy()
        self._clock = clock
        self._state = BreakerState()
        self._lock = threading.Lock()

    @property
    def state(self) -> BreakerState:
        with self._lock:
            return self._state

    def allow(self) -> BreakerDecision:
        with self._lock:
            decision, self._state = breaker_allow(self._state, self._clock(), self.policy)
            return decision

    def record(self, success: bool) -> None:
        with self._lock:
            self._state = breaker_on_result(self._state, success, self._clock(), self.policy)


class BreakerRegistry:
    """One breaker per provider, created on first use."""

    def __init__(self, policy: BreakerPolicy | None = None,
                 clock: Callable[[], float] = time.monotonic):
        self.policy = policy or BreakerPolicy()
        self._clock = clock
        self._breakers: dict[str, CircuitBreaker] = {}
        self._lock = threading.Lock()

    def for_provider(self, provider: str) -> CircuitBreaker:
        with self._lock:
            breaker = self._breakers.get(provider)
            if breaker is None:
                breaker = CircuitBreaker(self.policy, self._clock)
                self._breakers[provider] = breaker
            return breaker

    def phases(self) -> dict[str, str]:
        with self._lock:
            return {name: b.state.phase.value for name, b in self._breakers.items()}
