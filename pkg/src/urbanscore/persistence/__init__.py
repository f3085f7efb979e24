"""Durable storage: locations, score histories, profiles, favourites."""

from .base import (
    FavouriteRecord,
    LocationRecord,
    LocationScoreRecord,
    Purpose,
    Store,
    UserProfileRecord,
    default_profile,
    utc_now,
)
from .sql_store import SqlStore
from .sqlite_store import SqliteStore


def open_store(backend: str = "sqlite", path: str = ":memory:", url: str | None = None) -> Store:
    """Open the configured backend: embedded file store or relational adapter."""
    if backend == "sqlite":
        return SqliteStore(path)
    if backend == "sql":
        return SqlStore(url or "sqlite://")
    raise ValueError(f"unknown storage backend: {backend}")


__all__ = [
    "FavouriteRecord",
    "LocationRecord",
    "LocationScoreRecord",
    "Purpose",
    "Store",
    "UserProfileRecord",
    "SqlStore",
    "SqliteStore",
    "default_profile",
    "open_store",
    "utc_now",
]
