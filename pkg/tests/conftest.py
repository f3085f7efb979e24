from __future__ import annotations

import threading
from collections import Counter
from pathlib import Path

import pytest

from urbanscore.geodata.transport import FixtureTransport, canonical_params, provider_of

FIXTURES_DIR = Path(__file__).resolve().parent.parent / "fixtures"


class FakeClock:
    """Manually advanced monotonic clock for cache/breaker tests."""

    def __init__(self, start: float = 1000.0):
        self._now = start
        self._lock = threading.Lock()

    def __call__(self) -> float:
        with self._lock:
            return self._now

    def advance(self, seconds: float) -> None:
        with self._lock:
            self._now += seconds


class CountingTransport:
    """Wraps a transport, counting upstream calls; can fail whole providers."""

    def __init__(self, inner):
        self.inner = inner
        self.by_provider: Counter = Counter()
        self.by_request: Counter = Counter()
        self._failing: set[str] = set()
        self._lock = threading.Lock()

    def fail(self, provider: str, failing: bool = True) -> None:
        with self._lock:
            if failing:
                self._failing.add(provider)
            else:
                self._failing.discard(provider)

    def call(self, op: str, params: dict):
        from urbanscore.errors import ProviderUnavailable

        provider = provider_of(op)
        with self._lock:
            self.by_provider[provider] += 1
            self.by_request[(op, canonical_params(params))] += 1
            failing = provider in self._failing
        if failing:
            raise ProviderUnavailable(f"{provider} forced down")
        return self.inner.call(op, params)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES_DIR


@pytest.fixture
def fixture_transport() -> FixtureTransport:
    return FixtureTransport(FIXTURES_DIR)


@pytest.fixture
def fake_clock() -> FakeClock:
    return FakeClock()
