"""Deterministic fallback narrative built from locale string tables."""

from __future__ import annotations

import json
from datetime import timezone, datetime
from functools import lru_cache
from pathlib import Path

from ..scoring.weights import SUBSCORE_KEYS
from .payload import Explanation, ExplainPayload, ExplanationSource, word_count

_LOCALE_DIR = Path(__file__).parent / "locales"
DEFAULT_LOCALE = "ro"

MAX_TEMPLATE_FACILITIES = 3


@lru_cache(maxsize=None)
def _table(locale: str) -> dict:
    path = _LOCALE_DIR / f"{locale}.json"
    if not path.exists():
        path = _LOCALE_DIR / f"{DEFAULT_LOCALE}.json"
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def tone_band(aggregate: int) -> str:
    if aggregate >= 80:
        return "excellent"
    if aggregate >= 60:
        return "good"
    if aggregate >= 40:
        return "mixed"
    return "poor"


def render_template(payload: ExplainPayload, now: datetime | None = None) -> Explanation:
    """Fixed sentence skeleton; equal payloads yield byte-identical text."""
    table = _table(payload.locale)
    scores = payload.sub_scores.as_dict()
    best = max(SUBSCORE_KEYS, key=lambda k: scores[k])
    worst = min(SUBSCORE_KEYS, key=lambda k: scores[k])

    sentences = [
        table["tone"].format(band=table[f"band_{tone_band(payload.aggregate)}"],
                             aggregate=payload.aggregate),
        table["best_worst"].format(
            best_label=table["labels"][best],
            best_value=f"{scores[best]:.1f}",
            worst_label=table["labels"][worst],
            worst_value=f"{scores[worst]:.1f}",
        ),
    ]
    if payload.top_facilities:
        items = ", ".join(
            table["nearby_item"].format(name=ref.name, distance=ref.distance_m)
            for ref in payload.top_facilities[:MAX_TEMPLATE_FACILITIES]
        )
        sentences.append(table["nearby"].format(items=items))

    text = " ".join(sentences)
    return Explanation(
        text=text,
        word_count=word_count(text),
        source=ExplanationSource.TEMPLATE,
        grounded=True,
        generated_at=now or datetime.now(timezone.utc),
    )
