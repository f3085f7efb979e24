"""Embedded single-file store on stdlib sqlite3; zero external dependencies."""

from __future__ import annotations

import sqlite3
import threading
from datetime import datetime
from pathlib import Path

from ..errors import DuplicateRecord, StorageUnavailable, UnknownLocation, UnknownRecord
from ..geo import GeoPoint
from ..scoring.weights import SubScores
from .base import (
    BatchBuffer,
    FavouriteRecord,
    LocationRecord,
    LocationScoreRecord,
    Purpose,
    Store,
    UserProfileRecord,
    default_profile,
    from_epoch_us,
    micro_coords,
    to_epoch_us,
    utc_now,
    validate_profile_write,
)

# Monotonically versioned migration ledger; applied in order at startup and
# recorded in schema_migrations so re-opens are no-ops.
MIGRATIONS: list[tuple[int, str]] = [
    (
        1,
        """
        CREATE TABLE locations (
            id INTEGER PRIMARY KEY AUTOINCREMENT,
            lat_micro INTEGER NOT NULL,
            lon_micro INTEGER NOT NULL,
            lat REAL NOT NULL,
            lon REAL NOT NULL,
            display_name TEXT NOT NULL,
            district TEXT,
            created_at_us INTEGER NOT NULL,
            UNIQUE (lat_micro, lon_micro)
        );
        CREATE TABLE users (
            user_id TEXT PRIMARY KEY,
            created_at_us INTEGER NOT NULL
        );
        CREATE TABLE profiles (
            user_id TEXT PRIMARY KEY REFERENCES users(user_id) ON DELETE CASCADE,
            w_air REAL NOT NULL, w_traffic REAL NOT NULL, w_lifestyle REAL NOT NULL,
            w_education REAL NOT NULL, w_metro REAL NOT NULL, w_surface REAL NOT NULL,
            traffic_sensitive INTEGER NOT NULL,
            declared_purpose TEXT NOT NULL,
            updated_at_us INTEGER NOT NULL
        );
        CREATE TABLE location_scores (
            id INTEGER PRIMARY KEY AUTOINCREMENT,
            location_id INTEGER NOT NULL REFERENCES locations(id) ON DELETE CASCADE,
            s_air REAL NOT NULL, s_traffic REAL NOT NULL, s_lifestyle REAL NOT NULL,
            s_education REAL NOT NULL, s_metro REAL NOT NULL, s_surface REAL NOT NULL,
            aggregate INTEGER NOT NULL,
            profile_hash TEXT NOT NULL,
            evaluated_at_us INTEGER NOT NULL
        );
        CREATE INDEX idx_scores_loc_time ON location_scores(location_id, evaluated_at_us);
        CREATE TABLE favourites (
            id INTEGER PRIMARY KEY AUTOINCREMENT,
            user_id TEXT NOT NULL REFERENCES users(user_id) ON DELETE CASCADE,
            location_id INTEGER NOT NULL REFERENCES locations(id) ON DELETE CASCADE,
            saved_at_us INTEGER NOT NULL,
            UNIQUE (user_id, location_id)
        );
        """,
    ),
]


class SqliteStore(Store):
    def __init__(self, path: str | Path = ":memory:"):
        try:
            self._conn = sqlite3.connect(str(path), check_same_thread=False)
            self._conn.execute("PRAGMA foreign_keys = ON")
            if str(path) != ":memory:":
                self._conn.execute("PRAGMA journal_mode = WAL")
        except sqlite3.Error as exc:
            raise StorageUnavailable(str(exc)) from exc
        self._lock = threading.RLock()
        self._batch = BatchBuffer(self._flush_rows)
        self._migrate()

    def _migrate(self) -> None:
        with self._tx() as cur:
            cur.execute(
                "CREATE TABLE IF NOT EXISTS schema_migrations ("
                "version INTEGER PRIMARY KEY, applied_at_us INTEGER NOT NULL)"
            )
            applied = {row[0] for row in cur.execute("SELECT version FROM schema_migrations")}
            for version, ddl in MIGRATIONS:
                if version in applied:
                    continue
                cur.executescript(ddl)
                cur.execute(
                    "INSERT INTO schema_migrations VALUES (?, ?)",
                    (version, to_epoch_us(utc_now())),
                )

    def _tx(self):
        return _Tx(self._conn, self._lock)

    # -- locations ---------------------------------------------------------

    def upsert_location(self, point: GeoPoint, display_name: str,
                        district: str | None = None) -> LocationRecord:
        lat_micro, lon_micro = micro_coords(point)
        with self._tx() as cur:
            row = cur.execute(
                "SELECT id, lat, lon, display_name, district, created_at_us "
                "FROM locations WHERE lat_micro = ? AND lon_micro = ?",
                (lat_micro, lon_micro),
            ).fetchone()
            if row:
                return _location(row)
            now = utc_now()
            cur.execute(
                "INSERT INTO locations (lat_micro, lon_micro, lat, lon, display_name,"
                " district, created_at_us) VALUES (?, ?, ?, ?, ?, ?, ?)",
                (lat_micro, lon_micro, point.lat, point.lon, display_name,
                 district, to_epoch_us(now)),
            )
            return LocationRecord(cur.lastrowid, point, display_name, district, now)

    def get_location(self, location_id: int) -> LocationRecord:
        with self._tx() as cur:
            row = cur.execute(
                "SELECT id, lat, lon, display_name, district, created_at_us "
                "FROM locations WHERE id = ?",
                (location_id,),
            ).fetchone()
        if not row:
            raise UnknownLocation(f"location {location_id} does not exist")
        return _location(row)

    def delete_location(self, location_id: int) -> None:
        self.flush()
        with self._tx() as cur:
            if cur.execute("DELETE FROM locations WHERE id = ?", (location_id,)).rowcount == 0:
                raise UnknownLocation(f"location {location_id} does not exist")

    # -- score history -----------------------------------------------------

    def save_score(self, location_id: int, sub_scores: SubScores, aggregate: int,
                   profile_hash: str) -> LocationScoreRecord:
        self.get_location(location_id)  # UnknownLocation before buffering
        record = LocationScoreRecord(
            id=None,
            location_id=location_id,
            sub_scores=sub_scores,
            aggregate=aggregate,
            profile_hash=profile_hash,
            evaluated_at=utc_now(),
        )
        self._batch.add(record)
        return record

    def _flush_rows(self, rows: list[LocationScoreRecord]) -> None:
        with self._tx() as cur:
            cur.executemany(
                "INSERT INTO location_scores (location_id, s_air, s_traffic, s_lifestyle,"
                " s_education, s_metro, s_surface, aggregate, profile_hash, evaluated_at_us)"
                " VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?)",
                [
                    (r.location_id, *r.sub_scores.as_tuple(), r.aggregate,
                     r.profile_hash, to_epoch_us(r.evaluated_at))
                    for r in rows
                ],
            )

    def flush(self) -> None:
        self._batch.flush()

    def list_scores(self, location_id: int, since: datetime | None = None,
                    until: datetime | None = None) -> list[LocationScoreRecord]:
        self.flush()
        self.get_location(location_id)
        query = (
            "SELECT id, location_id, s_air, s_traffic, s_lifestyle, s_education,"
            " s_metro, s_surface, aggregate, profile_hash, evaluated_at_us"
            " FROM location_scores WHERE location_id = ?"
        )
        args: list = [location_id]
        query, args = _time_range(query, args, since, until)
        with self._tx() as cur:
            rows = cur.execute(query + " ORDER BY evaluated_at_us, id", args).fetchall()
        return [_score(row) for row in rows]

    def iter_scores(self, since: datetime | None = None,
                    until: datetime | None = None) -> list[LocationScoreRecord]:
        self.flush()
        query = (
            "SELECT id, location_id, s_air, s_traffic, s_lifestyle, s_education,"
            " s_metro, s_surface, aggregate, profile_hash, evaluated_at_us"
            " FROM location_scores WHERE 1 = 1"
        )
        query, args = _time_range(query, [], since, until)
        with self._tx() as cur:
            rows = cur.execute(query + " ORDER BY evaluated_at_us, id", args).fetchall()
        return [_score(row) for row in rows]

    # -- profiles ----------------------------------------------------------

    def _ensure_user(self, cur, user_id: str) -> None:
        cur.execute(
            "INSERT OR IGNORE INTO users (user_id, created_at_us) VALUES (?, ?)",
            (user_id, to_epoch_us(utc_now())),
        )

    def save_profile(self, user_id: str, weights, traffic_sensitive: bool,
                     declared_purpose: Purpose) -> UserProfileRecord:
        profile = validate_profile_write(weights, traffic_sensitive)
        now = utc_now()
        with self._tx() as cur:
            self._ensure_user(cur, user_id)
            cur.execute(
                "INSERT INTO profiles (user_id, w_air, w_traffic, w_lifestyle, w_education,"
                " w_metro, w_surface, traffic_sensitive, declared_purpose, updated_at_us)"
                " VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?)"
                " ON CONFLICT(user_id) DO UPDATE SET"
                " w_air=excluded.w_air, w_traffic=excluded.w_traffic,"
                " w_lifestyle=excluded.w_lifestyle, w_education=excluded.w_education,"
                " w_metro=excluded.w_metro, w_surface=excluded.w_surface,"
                " traffic_sensitive=excluded.traffic_sensitive,"
                " declared_purpose=excluded.declared_purpose,"
                " updated_at_us=excluded.updated_at_us",
                (user_id, *profile.weights, int(profile.traffic_sensitive),
                 Purpose(declared_purpose).value, to_epoch_us(now)),
            )
        return UserProfileRecord(user_id, profile.weights, profile.traffic_sensitive,
                                 Purpose(declared_purpose), now)

    def load_profile(self, user_id: str) -> UserProfileRecord:
        with self._tx() as cur:
            row = cur.execute(
                "SELECT user_id, w_air, w_traffic, w_lifestyle, w_education, w_metro,"
                " w_surface, traffic_sensitive, declared_purpose, updated_at_us"
                " FROM profiles WHERE user_id = ?",
                (user_id,),
            ).fetchone()
        if not row:
            return default_profile(user_id)
        return _profile(row)

    def iter_profiles(self) -> list[UserProfileRecord]:
        with self._tx() as cur:
            rows = cur.execute(
                "SELECT user_id, w_air, w_traffic, w_lifestyle, w_education, w_metro,"
                " w_surface, traffic_sensitive, declared_purpose, updated_at_us FROM profiles"
            ).fetchall()
        return [_profile(row) for row in rows]

    def delete_user(self, user_id: str) -> None:
        with self._tx() as cur:
            if cur.execute("DELETE FROM users WHERE user_id = ?", (user_id,)).rowcount == 0:
                raise UnknownRecord(f"user {user_id} does not exist")

    # -- favourites ---------------------------------------------------------

    def add_favourite(self, user_id: str, location_id: int) -> FavouriteRecord:
        self.get_location(location_id)
        now = utc_now()
        with self._tx() as cur:
            self._ensure_user(cur, user_id)
            try:
                cur.execute(
                    "INSERT INTO favourites (user_id, location_id, saved_at_us)"
                    " VALUES (?, ?, ?)",
                    (user_id, location_id, to_epoch_us(now)),
                )
            except sqlite3.IntegrityError as exc:
                raise DuplicateRecord(
                    f"favourite ({user_id}, {location_id}) already exists"
                ) from exc
            return FavouriteRecord(cur.lastrowid, user_id, location_id, now)

    def remove_favourite(self, user_id: str, location_id: int) -> None:
        with self._tx() as cur:
            deleted = cur.execute(
                "DELETE FROM favourites WHERE user_id = ? AND location_id = ?",
                (user_id, location_id),
            ).rowcount
        if deleted == 0:
            raise UnknownRecord(f"favourite ({user_id}, {location_id}) does not exist")

    def list_favourites(self, user_id: str) -> list[FavouriteRecord]:
        with self._tx() as cur:
            rows = cur.execute(
                "SELECT id, user_id, location_id, saved_at_us FROM favourites"
                " WHERE user_id = ? ORDER BY saved_at_us, id",
                (user_id,),
            ).fetchall()
        return [
            FavouriteRecord(row[0], row[1], row[2], from_epoch_us(row[3])) for row in rows
        ]

    def close(self) -> None:
        self._batch.close()
        with self._lock:
            self._conn.close()


class _Tx:
    """Transaction scope: one cursor under the store lock, commit/rollback."""

    def __init__(self, conn: sqlite3.Connection, lock: threading.RLock):
        self._conn = conn
        self._lock = lock

    def __enter__(self) -> sqlite3.Cursor:
        self._lock.acquire()
        try:
            self._cursor = self._conn.cursor()
        except sqlite3.Error as exc:
            self._lock.release()
            raise StorageUnavailable(str(exc)) from exc
        return self._cursor

    def __exit__(self, exc_type, exc, tb) -> bool:
        try:
            if exc_type is None:
                self._conn.commit()
            else:
                self._conn.rollback()
        finally:
            self._cursor.close()
            self._lock.release()
        if exc_type is not None and issubclass(exc_type, sqlite3.OperationalError):
            raise StorageUnavailable(str(exc)) from exc
        return False


def _time_range(query: str, args: list, since: datetime | None, until: datetime | None):
    # half-open [since, until): the boundary record at `until` is excluded
    if since is not None:
        query += " AND evaluated_at_us >= ?"
        args.append(to_epoch_us(since))
    if until is not None:
        query += " AND evaluated_at_us < ?"
        args.append(to_epoch_us(until))
    return query, args


def _location(row) -> LocationRecord:
    return LocationRecord(row[0], GeoPoint(row[1], row[2]), row[3], row[4],
                          from_epoch_us(row[5]))


def _score(row) -> LocationScoreRecord:
    return LocationScoreRecord(
        id=row[0],
        location_id=row[1],
        sub_scores=SubScores(*row[2:8]),
        aggregate=row[8],
        profile_hash=row[9],
        evaluated_at=from_epoch_us(row[10]),
    )


def _profile(row) -> UserProfileRecord:
    return UserProfileRecord(
        user_id=row[0],
        weights=tuple(row[1:7]),
        traffic_sensitive=bool(row[7]),
        declared_purpose=Purpose(row[8]),
        updated_at=from_epoch_us(row[9]),
    )
