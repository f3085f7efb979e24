"""HTTP surface: evaluation, score history, profiles, favourites, stats, health."""

from __future__ import annotations

import secrets
from datetime import datetime, timezone

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from ..errors import (
    DuplicateRecord,
    GeocodeFailed,
    InvalidRequest,
    NotFound,
    StorageUnavailable,
    UnknownLocation,
    UnknownRecord,
)
from ..geo import GeoPoint
from ..persistence.base import Purpose
from ..scoring.weights import SUBSCORE_KEYS, PreferenceProfile
from .engine import EvaluateRequest, ScoreReport
from .runtime import Runtime
from .stats import compute_stats

CSRF_COOKIE = "urbanscore_csrf"
CSRF_HEADER = "x-csrf-token"
_STATE_CHANGING = {"POST", "PUT", "DELETE", "PATCH"}


class PointBody(BaseModel):
    lat: float
    lon: float


class ProfileWeightsBody(BaseModel):
    weights: dict[str, float] | list[float]
    traffic_sensitive: bool = False


class EvaluateBody(BaseModel):
    address: str | None = None
    point: PointBody | None = None
    radius_m: int = 800
    profile: ProfileWeightsBody | None = None
    locale: str | None = None


class ProfilePutBody(ProfileWeightsBody):
    declared_purpose: str = Purpose.RESIDENCE.value


class FavouriteBody(BaseModel):
    location_id: int


def _weights_tuple(raw: dict[str, float] | list[float]) -> tuple[float, ...]:
    if isinstance(raw, dict):
        missing = [k for k in SUBSCORE_KEYS if k not in raw]
        if missing:
            raise InvalidRequest(f"profile weights missing components: {missing}")
        return tuple(float(raw[k]) for k in SUBSCORE_KEYS)
    return tuple(float(v) for v in raw)


def _profile_from_body(body: ProfileWeightsBody | None) -> PreferenceProfile | None:
    if body is None:
        return None
    try:
        return PreferenceProfile(
            weights=_weights_tuple(body.weights),
            traffic_sensitive=body.traffic_sensitive,
        )
    except ValueError as exc:
        raise InvalidRequest(str(exc)) from exc


def _parse_instant(raw: str | None) -> datetime | None:
    if raw is None:
        return None
    try:
        parsed = datetime.fromisoformat(raw.replace("Z", "+00:00"))
    except ValueError as exc:
        raise InvalidRequest(f"bad timestamp {raw!r}") from exc
    if parsed.tzinfo is None:
        parsed = parsed.replace(tzinfo=timezone.utc)
    return parsed


def _bearer_user(request: Request) -> str | None:
    header = request.headers.get("authorization", "")
    if header.lower().startswith("bearer "):
        token = header[7:].strip()
        return token or None
    return None


def report_to_dict(report: ScoreReport) -> dict:
    return {
        "location": {
            "point": {"lat": report.location.point.lat, "lon": report.location.point.lon},
            "display_name": report.location.display_name,
            "hierarchy": report.location.hierarchy,
            "source_query": report.location.source_query,
        },
        "location_id": report.location_id,
        "sub_scores": report.sub_scores.as_dict(),
        "aggregate": report.aggregate,
        "weights": dict(zip(SUBSCORE_KEYS, report.weights)),
        "profile_hash": report.profile_hash,
        "degraded": sorted(report.degraded),
        "facilities": {
            "counts": {cat.value: n for cat, n in report.facilities.counts.items()},
            "entropy_nats": report.facilities.entropy_nats,
            "routes": list(report.facilities.routes),
            "nearest_metro_m": report.facilities.nearest_metro_m,
            "schools": [[cat.value, dist] for cat, dist in report.facilities.schools],
        },
        "explanation": {
            "text": report.explanation.text,
            "word_count": report.explanation.word_count,
            "source": report.explanation.source.value,
            "grounded": report.explanation.grounded,
            "generated_at": report.explanation.generated_at.isoformat(),
        },
        "timings_ms": report.timings_ms,
        "feed_freshness": report.feed_freshness,
    }


def create_app(runtime: Runtime) -> FastAPI:
    app = FastAPI(title="urbanscore", docs_url=None, redoc_url=None)
    engine = runtime.engine
    store = runtime.store

    from fastapi.middleware.cors import CORSMiddleware

    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(runtime.config.service.cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )

    # -- CSRF double-submit guard on browser (cookie-bearing) mutations ------

    @app.middleware("http")
    async def csrf_guard(request: Request, call_next):
        if request.method in _STATE_CHANGING and request.cookies:
            cookie = request.cookies.get(CSRF_COOKIE)
            header = request.headers.get(CSRF_HEADER)
            if not cookie or header != cookie:
                return JSONResponse(
                    {"error": "anti-forgery token missing or mismatched"}, status_code=403
                )
        return await call_next(request)

    # -- error mapping --------------------------------------------------------

    @app.exception_handler(RequestValidationError)
    async def on_validation(request: Request, exc: RequestValidationError):
        return JSONResponse({"error": "InvalidRequest", "detail": str(exc)}, status_code=400)

    def _register(exc_type, status, label):
        @app.exception_handler(exc_type)
        async def handler(request: Request, exc, _status=status, _label=label):
            return JSONResponse({"error": _label, "detail": str(exc)}, status_code=_status)

    _register(InvalidRequest, 400, "InvalidRequest")
    _register(NotFound, 404, "Unknown")
    _register(UnknownLocation, 404, "Unknown")
    _register(UnknownRecord, 404, "Unknown")
    _register(DuplicateRecord, 409, "Duplicate")
    _register(GeocodeFailed, 422, "GeocodeFailed")
    _register(StorageUnavailable, 503, "StorageUnavailable")

    # -- routes ----------------------------------------------------------------

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "breakers": runtime.breakers.phases()}

    @app.get("/api/v1/csrf")
    def issue_csrf(response: Response):
        token = secrets.token_urlsafe(16)
        response.set_cookie(CSRF_COOKIE, token, samesite="strict")
        return {"token": token}

    @app.post("/api/v1/evaluate")
    def evaluate(body: EvaluateBody, request: Request):
        point = GeoPoint(body.point.lat, body.point.lon) if body.point else None
        evaluate_request = EvaluateRequest(
            address=body.address,
            point=point,
            radius_m=body.radius_m,
            profile=_profile_from_body(body.profile),
            user_id=_bearer_user(request),
            locale=body.locale,
        )
        return report_to_dict(engine.evaluate(evaluate_request))

    @app.get("/api/v1/locations/{location_id}/scores")
    def score_history(location_id: int, since: str | None = None, until: str | None = None):
        records = store.list_scores(location_id, _parse_instant(since), _parse_instant(until))
        return {
            "location_id": location_id,
            "scores": [
                {
                    "sub_scores": r.sub_scores.as_dict(),
                    "aggregate": r.aggregate,
                    "profile_hash": r.profile_hash,
                    "evaluated_at": r.evaluated_at.isoformat(),
                }
                for r in records
            ],
        }

    @app.get("/api/v1/profile")
    def get_profile(request: Request):
        user = _bearer_user(request)
        if user is None:
            return JSONResponse({"error": "missing bearer user token"}, status_code=401)
        record = store.load_profile(user)
        return {
            "user_id": record.user_id,
            "weights": dict(zip(SUBSCORE_KEYS, record.weights)),
            "traffic_sensitive": record.traffic_sensitive,
            "declared_purpose": record.declared_purpose.value,
            "updated_at": record.updated_at.isoformat() if record.updated_at else None,
        }

    @app.put("/api/v1/profile")
    def put_profile(body: ProfilePutBody, request: Request):
        user = _bearer_user(request)
        if user is None:
            return JSONResponse({"error": "missing bearer user token"}, status_code=401)
        try:
            purpose = Purpose(body.declared_purpose)
        except ValueError as exc:
            raise InvalidRequest(f"unknown purpose {body.declared_purpose!r}") from exc
        try:
            record = store.save_profile(
                user, _weights_tuple(body.weights), body.traffic_sensitive, purpose
            )
        except ValueError as exc:
            raise InvalidRequest(str(exc)) from exc
        return {"user_id": record.user_id, "updated_at": record.updated_at.isoformat()}

    @app.get("/api/v1/favourites")
    def list_favourites(request: Request):
        user = _bearer_user(request)
        if user is None:
            return JSONResponse({"error": "missing bearer user token"}, status_code=401)
        return {
            "favourites": [
                {"location_id": f.location_id, "saved_at": f.saved_at.isoformat()}
                for f in store.list_favourites(user)
            ]
        }

    @app.post("/api/v1/favourites")
    def add_favourite(body: FavouriteBody, request: Request):
        user = _bearer_user(request)
        if user is None:
            return JSONResponse({"error": "missing bearer user token"}, status_code=401)
        record = store.add_favourite(user, body.location_id)
        return {"location_id": record.location_id, "saved_at": record.saved_at.isoformat()}

    @app.delete("/api/v1/favourites/{location_id}")
    def remove_favourite(location_id: int, request: Request):
        user = _bearer_user(request)
        if user is None:
            return JSONResponse({"error": "missing bearer user token"}, status_code=401)
        store.remove_favourite(user, location_id)
        return {"removed": location_id}

    @app.get("/api/v1/stats")
    def stats(since: str | None = None, until: str | None = None):
        report = compute_stats(store, _parse_instant(since), _parse_instant(until))
        return {
            "top_districts": [
                {"district": d, "query_share": share} for d, share in report.top_districts
            ],
            "amenity_preference_order": list(report.amenity_preference_order),
            "purpose_distribution": report.purpose_distribution,
        }

    return app
