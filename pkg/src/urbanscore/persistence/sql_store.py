"""Relational adapter over SQLAlchemy Core; same contract as the embedded store.

Accepts any SQLAlchemy URL, so the engine can point at a server database in
production while the test suite exercises the adapter against SQLite files.
"""

from __future__ import annotations

from datetime import datetime

import sqlalchemy as sa
from sqlalchemy.exc import IntegrityError, SQLAlchemyError

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

metadata = sa.MetaData()

locations = sa.Table(
    "locations",
    metadata,
    sa.Column("id", sa.Integer, primary_key=True),
    sa.Column("lat_micro", sa.BigInteger, nullable=False),
    sa.Column("lon_micro", sa.BigInteger, nullable=False),
    sa.Column("lat", sa.Float, nullable=False),
    sa.Column("lon", sa.Float, nullable=False),
    sa.Column("display_name", sa.Text, nullable=False),
    sa.Column("district", sa.Text),
    sa.Column("created_at_us", sa.BigInteger, nullable=False),
    sa.UniqueConstraint("lat_micro", "lon_micro", name="uq_location_coords"),
)

users = sa.Table(
    "users",
    metadata,
    sa.Column("user_id", sa.Text, primary_key=True),
    sa.Column("created_at_us", sa.BigInteger, nullable=False),
)

profiles = sa.Table(
    "profiles",
    metadata,
    sa.Column("user_id", sa.Text,
              sa.ForeignKey("users.user_id", ondelete="CASCADE"), primary_key=True),
    sa.Column("w_air", sa.Float, nullable=False),
    sa.Column("w_traffic", sa.Float, nullable=False),
    sa.Column("w_lifestyle", sa.Float, nullable=False),
    sa.Column("w_education", sa.Float, nullable=False),
    sa.Column("w_metro", sa.Float, nullable=False),
    sa.Column("w_surface", sa.Float, nullable=False),
    sa.Column("traffic_sensitive", sa.Boolean, nullable=False),
    sa.Column("declared_purpose", sa.Text, nullable=False),
    sa.Column("updated_at_us", sa.BigInteger, nullable=False),
)

location_scores = sa.Table(
    "location_scores",
    metadata,
    sa.Column("id", sa.Integer, primary_key=True),
    sa.Column("location_id", sa.Integer,
              sa.ForeignKey("locations.id", ondelete="CASCADE"), nullable=False),
    sa.Column("s_air", sa.Float, nullable=False),
    sa.Column("s_traffic", sa.Float, nullable=False),
    sa.Column("s_lifestyle", sa.Float, nullable=False),
    sa.Column("s_education", sa.Float, nullable=False),
    sa.Column("s_metro", sa.Float, nullable=False),
    sa.Column("s_surface", sa.Float, nullable=False),
    sa.Column("aggregate", sa.Integer, nullable=False),
    sa.Column("profile_hash", sa.Text, nullable=False),
    sa.Column("evaluated_at_us", sa.BigInteger, nullable=False),
    sa.Index("ix_scores_loc_time", "location_id", "evaluated_at_us"),
)

favourites = sa.Table(
    "favourites",
    metadata,
    sa.Column("id", sa.Integer, primary_key=True),
    sa.Column("user_id", sa.Text,
              sa.ForeignKey("users.user_id", ondelete="CASCADE"), nullable=False),
    sa.Column("location_id", sa.Integer,
              sa.ForeignKey("locations.id", ondelete="CASCADE"), nullable=False),
    sa.Column("saved_at_us", sa.BigInteger, nullable=False),
    sa.UniqueConstraint("user_id", "location_id", name="uq_favourite"),
)

migration_ledger = sa.Table(
    "schema_migrations",
    metadata,
    sa.Column("version", sa.Integer, primary_key=True),
    sa.Column("applied_at_us", sa.BigInteger, nullable=False),
)

# version -> DDL step; step 1 creates the full current schema
MIGRATIONS: list[tuple[int, callable]] = [
    (1, lambda conn: metadata.create_all(conn, checkfirst=True)),
]


class SqlStore(Store):
    def __init__(self, url: str = "sqlite://"):
        try:
            self._engine = sa.create_engine(url, future=True)
            if url.startswith("sqlite"):
                sa.event.listen(
                    self._engine, "connect",
                    lambda conn, _: conn.execute("PRAGMA foreign_keys = ON"),
                )
            self._migrate()
        except SQLAlchemyError as exc:
            raise StorageUnavailable(str(exc)) from exc
        self._batch = BatchBuffer(self._flush_rows)

    def _migrate(self) -> None:
        with self._engine.begin() as conn:
            migration_ledger.create(conn, checkfirst=True)
            applied = {row[0] for row in conn.execute(sa.select(migration_ledger.c.version))}
            for version, step in MIGRATIONS:
                if version in applied:
                    continue
                step(conn)
                conn.execute(migration_ledger.insert().values(
                    version=version, applied_at_us=to_epoch_us(utc_now())))

    def _begin(self):
        try:
            return self._engine.begin()
        except SQLAlchemyError as exc:
            raise StorageUnavailable(str(exc)) from exc

    # -- locations ---------------------------------------------------------

    def upsert_location(self, point: GeoPoint, display_name: str,
                        district: str | None = None) -> LocationRecord:
        lat_micro, lon_micro = micro_coords(point)
        with self._begin() as conn:
            row = conn.execute(
                sa.select(locations).where(
                    locations.c.lat_micro == lat_micro,
                    locations.c.lon_micro == lon_micro,
                )
            ).first()
            if row:
                return _location(row)
            now = utc_now()
            result = conn.execute(locations.insert().values(
                lat_micro=lat_micro, lon_micro=lon_micro,
                lat=point.lat, lon=point.lon,
                display_name=display_name, district=district,
                created_at_us=to_epoch_us(now),
            ))
            return LocationRecord(result.inserted_primary_key[0], point,
                                  display_name, district, now)

    def get_location(self, location_id: int) -> LocationRecord:
        with self._begin() as conn:
            row = conn.execute(
                sa.select(locations).where(locations.c.id == location_id)
            ).first()
        if not row:
            raise UnknownLocation(f"location {location_id} does not exist")
        return _location(row)

    def delete_location(self, location_id: int) -> None:
        self.flush()
        with self._begin() as conn:
            deleted = conn.execute(
                locations.delete().where(locations.c.id == location_id)
            ).rowcount
        if deleted == 0:
            raise UnknownLocation(f"location {location_id} does not exist")

    # -- score history -----------------------------------------------------

    def save_score(self, location_id: int, sub_scores: SubScores, aggregate: int,
                   profile_hash: str) -> LocationScoreRecord:
        self.get_location(location_id)
        record = LocationScoreRecord(
            id=None, location_id=location_id, sub_scores=sub_scores,
            aggregate=aggregate, profile_hash=profile_hash, evaluated_at=utc_now(),
        )
        self._batch.add(record)
        return record

    def _flush_rows(self, rows: list[LocationScoreRecord]) -> None:
        with self._begin() as conn:
            conn.execute(location_scores.insert(), [
                {
                    "location_id": r.location_id,
                    "s_air": r.sub_scores.air, "s_traffic": r.sub_scores.traffic,
                    "s_lifestyle": r.sub_scores.lifestyle,
                    "s_education": r.sub_scores.education,
                    "s_metro": r.sub_scores.metro, "s_surface": r.sub_scores.surface,
                    "aggregate": r.aggregate, "profile_hash": r.profile_hash,
                    "evaluated_at_us": to_epoch_us(r.evaluated_at),
                }
                for r in rows
            ])

    def flush(self) -> None:
        self._batch.flush()

    def _select_scores(self, where, since, until):
        query = sa.select(location_scores).where(*where)
        if since is not None:
            query = query.where(location_scores.c.evaluated_at_us >= to_epoch_us(since))
        if until is not None:
            # half-open interval: the record at `until` is excluded
            query = query.where(location_scores.c.evaluated_at_us < to_epoch_us(until))
        query = query.order_by(location_scores.c.evaluated_at_us, location_scores.c.id)
        with self._begin() as conn:
            return [_score(row) for row in conn.execute(query)]

    def list_scores(self, location_id: int, since: datetime | None = None,
                    until: datetime | None = None) -> list[LocationScoreRecord]:
        self.flush()
        self.get_location(location_id)
        return self._select_scores([location_scores.c.location_id == location_id],
                                   since, until)

    def iter_scores(self, since: datetime | None = None,
                    until: datetime | None = None) -> list[LocationScoreRecord]:
        self.flush()
        return self._select_scores([], since, until)

    # -- profiles ----------------------------------------------------------

    def _ensure_user(self, conn, user_id: str) -> None:
        exists = conn.execute(
            sa.select(users.c.user_id).where(users.c.user_id == user_id)
        ).first()
        if not exists:
            conn.execute(users.insert().values(
                user_id=user_id, created_at_us=to_epoch_us(utc_now())))

    def save_profile(self, user_id: str, weights, traffic_sensitive: bool,
                     declared_purpose: Purpose) -> UserProfileRecord:
        profile = validate_profile_write(weights, traffic_sensitive)
        now = utc_now()
        values = {
            "w_air": profile.weights[0], "w_traffic": profile.weights[1],
            "w_lifestyle": profile.weights[2], "w_education": profile.weights[3],
            "w_metro": profile.weights[4], "w_surface": profile.weights[5],
            "traffic_sensitive": profile.traffic_sensitive,
            "declared_purpose": Purpose(declared_purpose).value,
            "updated_at_us": to_epoch_us(now),
        }
        with self._begin() as conn:
            self._ensure_user(conn, user_id)
            updated = conn.execute(
                profiles.update().where(profiles.c.user_id == user_id).values(**values)
            ).rowcount
            if updated == 0:
                conn.execute(profiles.insert().values(user_id=user_id, **values))
        return UserProfileRecord(user_id, profile.weights, profile.traffic_sensitive,
                                 Purpose(declared_purpose), now)

    def load_profile(self, user_id: str) -> UserProfileRecord:
        with self._begin() as conn:
            row = conn.execute(
                sa.select(profiles).where(profiles.c.user_id == user_id)
            ).first()
        if not row:
            return default_profile(user_id)
        return _profile(row)

    def iter_profiles(self) -> list[UserProfileRecord]:
        with self._begin() as conn:
            rows = conn.execute(sa.select(profiles)).all()
        return [_profile(row) for row in rows]

    def delete_user(self, user_id: str) -> None:
        with self._begin() as conn:
            deleted = conn.execute(
                users.delete().where(users.c.user_id == user_id)
            ).rowcount
        if deleted == 0:
            raise UnknownRecord(f"user {user_id} does not exist")

    # -- favourites ---------------------------------------------------------

    def add_favourite(self, user_id: str, location_id: int) -> FavouriteRecord:
        self.get_location(location_id)
        now = utc_now()
        try:
            with self._begin() as conn:
                self._ensure_user(conn, user_id)
                result = conn.execute(favourites.insert().values(
                    user_id=user_id, location_id=location_id,
                    saved_at_us=to_epoch_us(now)))
                return FavouriteRecord(result.inserted_primary_key[0],
                                       user_id, location_id, now)
        except IntegrityError as exc:
            raise DuplicateRecord(
                f"favourite ({user_id}, {location_id}) already exists") from exc

    def remove_favourite(self, user_id: str, location_id: int) -> None:
        with self._begin() as conn:
            deleted = conn.execute(favourites.delete().where(
                favourites.c.user_id == user_id,
                favourites.c.location_id == location_id,
            )).rowcount
        if deleted == 0:
            raise UnknownRecord(f"favourite ({user_id}, {location_id}) does not exist")

    def list_favourites(self, user_id: str) -> list[FavouriteRecord]:
        with self._begin() as conn:
            rows = conn.execute(
                sa.select(favourites).where(favourites.c.user_id == user_id)
                .order_by(favourites.c.saved_at_us, favourites.c.id)
            ).all()
        return [FavouriteRecord(r.id, r.user_id, r.location_id, from_epoch_us(r.saved_at_us))
                for r in rows]

    def close(self) -> None:
        self._batch.close()
        self._engine.dispose()


def _location(row) -> LocationRecord:
    return LocationRecord(row.id, GeoPoint(row.lat, row.lon), row.display_name,
                          row.district, from_epoch_us(row.created_at_us))


def _score(row) -> LocationScoreRecord:
    return LocationScoreRecord(
        id=row.id,
        location_id=row.location_id,
        sub_scores=SubScores(row.s_air, row.s_traffic, row.s_lifestyle,
                             row.s_education, row.s_metro, row.s_surface),
        aggregate=row.aggregate,
        profile_hash=row.profile_hash,
        evaluated_at=from_epoch_us(row.evaluated_at_us),
    )


def _profile(row) -> UserProfileRecord:
    return UserProfileRecord(
        user_id=row.user_id,
        weights=(row.w_air, row.w_traffic, row.w_lifestyle,
                 row.w_education, row.w_metro, row.w_surface),
        traffic_sensitive=bool(row.traffic_sensitive),
        declared_purpose=Purpose(row.declared_purpose),
        updated_at=from_epoch_us(row.updated_at_us),
    )
