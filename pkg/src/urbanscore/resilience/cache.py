"""Two-tier response cache with stale retention and stampede coalescing."""

from __future__ import annotations

import threading
import time
from collections import OrderedDict
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Protocol


class Freshness(str, Enum):
    LIVE = "live"  # fetched from the provider on this call
    CACHED = "cached"  # served within TTL
    STALE = "stale"  # expired entry served because the provider was unreachable


@dataclass(frozen=True)
class CachePolicy:
    """Per-feed TTLs, seconds; matched to each feed's volatility."""

    geocode_ttl_s: float = 24 * 3600.0
    facilities_ttl_s: float = 600.0
    traffic_ttl_s: float = 60.0
    air_ttl_s: float = 3600.0

    def __post_init__(self) -> None:
        if min(self.geocode_ttl_s, self.facilities_ttl_s, self.traffic_ttl_s, self.air_ttl_s) <= 0:
            raise ValueError("TTLs must be > 0")

    def ttl_for(self, feed: str) -> float:
        try:
            return getattr(self, f"{feed}_ttl_s")
        except AttributeError:
            raise ValueError(f"unknown feed: {feed}") from None


class CacheStore(Protocol):
    """Key-value layer: entries carry an absolute expiry, reads may return
    expired entries (the caller decides whether stale is acceptable)."""

    def get(self, key: str) -> tuple[bytes, float] | None: ...

    def set(self, key: str, value: bytes, ttl_s: float) -> None: ...


class MemoryCacheStore:
    """Thread-safe in-memory store. Expired entries are retained (up to the
    capacity bound, evicting least-recently-used) so they can be served stale."""

    def __init__(self, max_entries: int = 4096, clock: Callable[[], float] = time.monotonic):
        self._entries: OrderedDict[str, tuple[bytes, float]] = OrderedDict()
        self._lock = threading.Lock()
        self._max_entries = max_entries
        self._clock = clock

    def get(self, key: str) -> tuple[bytes, float] | None:
        with self._lock:
            entry = self._entries.get(key)
            if entry is None:
                return None
            self._entries.move_to_end(key)
            return entry

    def set(self, key: str, value: bytes, ttl_s: float) -> None:
        with self._lock:
            self._entries[key] = (value, self._clock() + ttl_s)
            self._entries.move_to_end(key)
            while len(self._entries) > self._max_entries:
                self._entries.popitem(last=False)


@dataclass
class CacheLookup:
    value: bytes
    fresh: bool


class TwoTierCache:
    """In-process layer in front of an optional shared out-of-process layer.

    Fresh hits in the shared layer are promoted into the local layer. A lookup
    reporting ``fresh=False`` carries the most recent expired value seen in
    either layer, for stale serving while a provider is down.
    """

    def __init__(
        self,
        local: MemoryCacheStore | None = None,
        shared: CacheStore | None = None,
        clock: Callable[[], float] = time.monotonic,
    ):
        self.local = local or MemoryCacheStore(clock=clock)
        self.shared = shared
        self._clock = clock

    def lookup(self, key: str) -> CacheLookup | None:
        now = self._clock()
        stale: tuple[bytes, float] | None = None

        entry = self.local.get(key)
        if entry is not None:
            if entry[1] > now:
                return CacheLookup(entry[0], fresh=True)
            stale = entry

        if self.shared is not None:
            entry = self.shared.get(key)
            if entry is not None:
                if entry[1] > now:
                    self.local.set(key, entry[0], entry[1] - now)
                    return CacheLookup(entry[0], fresh=True)
                if stale is None or entry[1] > stale[1]:
                    stale = entry

        if stale is not None:
            return CacheLookup(stale[0], fresh=False)
        return None

    def store(self, key: str, value: bytes, ttl_s: float) -> None:
        self.local.set(key, value, ttl_s)
        if self.shared is not None:
            self.shared.set(key, value, ttl_s)


class SingleFlight:
    """Per-key mutual exclusion so concurrent misses coalesce into one fetch."""

    def __init__(self):
        self._guard = threading.Lock()
        self._locks: dict[str, tuple[threading.Lock, int]] = {}

    def lock(self, key: str) -> "_Flight":
        return _Flight(self, key)

    def _acquire(self, key: str) -> threading.Lock:
        with self._guard:
            lock, refs = self._locks.get(key, (threading.Lock(), 0))
            self._locks[key] = (lock, refs + 1)
        lock.acquire()
        return lock

    def _release(self, key: str, lock: threading.Lock) -> None:
        lock.release()
        with self._guard:
            lock, refs = self._locks[key]
            if refs <= 1:
                del self._locks[key]
            else:
                self._locks[key] = (lock, refs - 1)


@dataclass
class _Flight:
    flight: SingleFlight
    key: str
    _lock: threading.Lock | None = field(default=None, repr=False)

    def __enter__(self):
        self._lock = self.flight._acquire(self.key)
        return self

    def __exit__(self, *exc):
        self.flight._release(self.key, self._lock)
        return False
