"""Explanation generation: remote model when configured, template otherwise,
grounding-validated and cached for 24 hours per (location, profile)."""

from __future__ import annotations

import hashlib
import json
import logging
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Protocol

import requests

from ..resilience.cache import SingleFlight
from ..scoring.weights import PreferenceProfile
from .grounding import ground_check
from .payload import (
    Explanation,
    ExplainPayload,
    ExplanationSource,
    MAX_EXPLANATION_WORDS,
    TARGET_EXPLANATION_WORDS,
    word_count,
)
from .template import render_template

logger = logging.getLogger("urbanscore.explain")

EXPLANATION_TTL_S = 24 * 3600.0
_PROMPT_PATH = Path(__file__).parent / "prompt.txt"


def profile_hash(profile: PreferenceProfile) -> str:
    """Stable digest of (weights rounded to 4 decimals, sensitivity switch)."""
    doc = {
        "weights": [round(w, 4) for w in profile.weights],
        "traffic_sensitive": profile.traffic_sensitive,
    }
    blob = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()


def build_prompt(payload: ExplainPayload) -> str:
    template = _PROMPT_PATH.read_text(encoding="utf-8")
    return template.format(
        target_words=TARGET_EXPLANATION_WORDS,
        locale=payload.locale,
        payload_json=payload.canonical_json(),
    )


class RemoteGenerator(Protocol):
    def generate(self, prompt: str) -> str: ...


class ChatCompletionClient:
    """Minimal chat-completion wire client (URL + key + model from config)."""

    def __init__(self, url: str, api_key: str | None = None,
                 model: str = "gpt-4o-mini", timeout_s: float = 20.0,
                 session: requests.Session | None = None):
        self.url = url
        self.api_key = api_key
        self.model = model
        self.timeout_s = timeout_s
        self._session = session or requests.Session()

    def generate(self, prompt: str) -> str:
        headers = {}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        body = {
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": 0.2,
        }
        logger.info("remote_explanation_request model=%s url=%s key=<redacted>",
                    self.model, self.url)
        resp = self._session.post(self.url, json=body, headers=headers,
                                  timeout=self.timeout_s)
        resp.raise_for_status()
        text = resp.json()["choices"][0]["message"]["content"]
        logger.info("remote_explanation_response words=%d", word_count(text))
        return str(text)


class ExplanationService:
    """Cache key is (location_id, profile_hash); misses for the same key
    coalesce so repeated views never multiply token cost."""

    def __init__(
        self,
        remote: RemoteGenerator | None = None,
        ttl_s: float = EXPLANATION_TTL_S,
        clock: Callable[[], float] = time.monotonic,
    ):
        self.remote = remote
        self.ttl_s = ttl_s
        self._clock = clock
        self._cache: dict[tuple[int, str], tuple[Explanation, float]] = {}
        self._flight = SingleFlight()
        self.remote_calls = 0  # counters for tests/metrics

    def get_explanation(
        self, location_id: int, payload: ExplainPayload, profile: PreferenceProfile
    ) -> Explanation:
        key = (location_id, profile_hash(profile))
        hit = self._lookup(key)
        if hit is not None:
            return hit
        with self._flight.lock(f"{key[0]}:{key[1]}"):
            hit = self._lookup(key)
            if hit is not None:
                return hit
            explanation = self._generate(payload)
            self._cache[key] = (explanation, self._clock() + self.ttl_s)
            return explanation

    def _lookup(self, key) -> Explanation | None:
        entry = self._cache.get(key)
        if entry is not None and entry[1] > self._clock():
            return entry[0]
        return None

    def _generate(self, payload: ExplainPayload) -> Explanation:
        if self.remote is not None:
            prompt = build_prompt(payload)
            for _ in range(2):  # one regeneration after a failed ground check
                try:
                    self.remote_calls += 1
                    text = self.remote.generate(prompt)
                except Exception as exc:  # remote failure falls back silently
                    logger.warning("remote explanation failed: %s", exc)
                    break
                grounded, ungrounded = ground_check(text, payload)
                if grounded and word_count(text) <= MAX_EXPLANATION_WORDS:
                    return Explanation(
                        text=text,
                        word_count=word_count(text),
                        source=ExplanationSource.REMOTE,
                        grounded=True,
                        generated_at=datetime.now(timezone.utc),
                    )
                logger.info("remote explanation rejected (ungrounded=%s words=%d)",
                            ungrounded, word_count(text))
        return render_template(payload)
