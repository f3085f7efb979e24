"""Storage records, the backend-agnostic store contract, and write batching."""

from __future__ import annotations

import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum

from ..geo import GeoPoint
from ..scoring.weights import DEFAULT_WEIGHTS, PreferenceProfile, SubScores

COORD_MICRO = 1_000_000  # unique-location rounding: 6 decimal places

BATCH_FLUSH_INTERVAL_S = 1.0
BATCH_FLUSH_THRESHOLD = 64


class Purpose(str, Enum):
    RESIDENCE = "residence"
    INVESTMENT = "investment"
    SHORT_TERM = "short_term"


@dataclass(frozen=True)
class LocationRecord:
    id: int
    point: GeoPoint
    display_name: str
    district: str | None
    created_at: datetime


@dataclass(frozen=True)
class LocationScoreRecord:
    id: int | None  # None while the row sits in the write buffer
    location_id: int
    sub_scores: SubScores
    aggregate: int
    profile_hash: str
    evaluated_at: datetime


@dataclass(frozen=True)
class UserProfileRecord:
    user_id: str
    weights: tuple[float, ...]
    traffic_sensitive: bool
    declared_purpose: Purpose
    updated_at: datetime | None


@dataclass(frozen=True)
class FavouriteRecord:
    id: int
    user_id: str
    location_id: int
    saved_at: datetime


def default_profile(user_id: str) -> UserProfileRecord:
    return UserProfileRecord(
        user_id=user_id,
        weights=DEFAULT_WEIGHTS,
        traffic_sensitive=False,
        declared_purpose=Purpose.RESIDENCE,
        updated_at=None,
    )


def utc_now() -> datetime:
    return datetime.now(timezone.utc)


def to_epoch_us(dt: datetime) -> int:
    if dt.tzinfo is None:
        raise ValueError("timestamps must be timezone-aware")
    return int(dt.timestamp() * 1_000_000)


def from_epoch_us(us: int) -> datetime:
    return datetime.fromtimestamp(us / 1_000_000, tz=timezone.utc)


def micro_coords(point: GeoPoint) -> tuple[int, int]:
    return (round(point.lat * COORD_MICRO), round(point.lon * COORD_MICRO))


def validate_profile_write(weights, traffic_sensitive) -> PreferenceProfile:
    """Reject invalid weight vectors at write time."""
    return PreferenceProfile(weights=tuple(float(w) for w in weights),
                             traffic_sensitive=bool(traffic_sensitive))


class BatchBuffer:
    """Buffers score writes; flushes on a 1 s timer or at 64 pending rows.

    The flush callback receives the buffered rows in insertion order, which
    preserves per-location append order in the backing table.
    """

    def __init__(self, flush_rows, interval_s: float = BATCH_FLUSH_INTERVAL_S,
                 threshold: int = BATCH_FLUSH_THRESHOLD):
        self._flush_rows = flush_rows
        self._interval_s = interval_s
        self._threshold = threshold
        self._rows: list = []
        self._lock = threading.Lock()
        self._timer: threading.Timer | None = None
        self._closed = False

    def add(self, row) -> None:
        flush_now = False
        with self._lock:
            if self._closed:
                raise RuntimeError("store is closed")
            self._rows.append(row)
            if len(self._rows) >= self._threshold:
                flush_now = True
            elif self._timer is None:
                self._timer = threading.Timer(self._interval_s, self.flush)
                self._timer.daemon = True
                self._timer.start()
        if flush_now:
            self.flush()

    def flush(self) -> None:
        with self._lock:
            rows, self._rows = self._rows, []
            if self._timer is not None:
                self._timer.cancel()
                self._timer = None
        if rows:
            self._flush_rows(rows)

    def close(self) -> None:
        with self._lock:
            self._closed = True
        self.flush()


class Store(ABC):
    """Contract shared by the embedded and the relational backends."""

    # locations
    @abstractmethod
    def upsert_location(self, point: GeoPoint, display_name: str,
                        district: str | None = None) -> LocationRecord: ...

    @abstractmethod
    def get_location(self, location_id: int) -> LocationRecord: ...

    @abstractmethod
    def delete_location(self, location_id: int) -> None: ...

    # score history
    @abstractmethod
    def save_score(self, location_id: int, sub_scores: SubScores, aggregate: int,
                   profile_hash: str) -> LocationScoreRecord: ...

    @abstractmethod
    def flush(self) -> None: ...

    @abstractmethod
    def list_scores(self, location_id: int, since: datetime | None = None,
                    until: datetime | None = None) -> list[LocationScoreRecord]: ...

    @abstractmethod
    def iter_scores(self, since: datetime | None = None,
                    until: datetime | None = None) -> list[LocationScoreRecord]: ...

    # profiles
    @abstractmethod
    def save_profile(self, user_id: str, weights, traffic_sensitive: bool,
                     declared_purpose: Purpose) -> UserProfileRecord: ...

    @abstractmethod
    def load_profile(self, user_id: str) -> UserProfileRecord: ...

    @abstractmethod
    def iter_profiles(self) -> list[UserProfileRecord]: ...

    @abstractmethod
    def delete_user(self, user_id: str) -> None: ...

    # favourites
    @abstractmethod
    def add_favourite(self, user_id: str, location_id: int) -> FavouriteRecord: ...

    @abstractmethod
    def remove_favourite(self, user_id: str, location_id: int) -> None: ...

    @abstractmethod
    def list_favourites(self, user_id: str) -> list[FavouriteRecord]: ...

    @abstractmethod
    def close(self) -> None: ...
