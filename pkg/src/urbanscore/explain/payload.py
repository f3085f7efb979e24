"""Explanation inputs and outputs."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from typing import Sequence

from ..geodata.types import Facility, FacilitySummary
from ..scoring.weights import SubScores

MAX_PAYLOAD_FACILITIES = 10
MAX_EXPLANATION_WORDS = 80
TARGET_EXPLANATION_WORDS = 60


class ExplanationSource(str, Enum):
    REMOTE = "remote"
    TEMPLATE = "template"


@dataclass(frozen=True)
class FacilityRef:
    name: str
    category: str
    distance_m: int  # whole meters so narrative text can quote it verbatim


@dataclass(frozen=True)
class ExplainPayload:
    """Everything the narrative layer may talk about.

    Sub-score values are rounded to one decimal and facility distances to
    whole meters when the payload is built, so the payload is simultaneously
    the cache-key input and the grounding vocabulary: equal payloads serialize
    identically, and any number quoted from it survives the lexical check.
    """

    sub_scores: SubScores
    aggregate: int
    top_facilities: tuple[FacilityRef, ...]
    routes: tuple[str, ...]
    radius_m: int
    locale: str = "ro"

    def __post_init__(self) -> None:
        if len(self.top_facilities) > MAX_PAYLOAD_FACILITIES:
            raise ValueError(f"at most {MAX_PAYLOAD_FACILITIES} facilities in a payload")

    def canonical_json(self) -> str:
        doc = {
            "sub_scores": {k: v for k, v in sorted(self.sub_scores.as_dict().items())},
            "aggregate": self.aggregate,
            "facilities": [
                {"name": f.name, "category": f.category, "distance_m": f.distance_m}
                for f in self.top_facilities
            ],
            "routes": list(self.routes),
            "radius_m": self.radius_m,
            "locale": self.locale,
        }
        return json.dumps(doc, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def build_payload(
    sub_scores: SubScores,
    aggregate: int,
    summary: FacilitySummary,
    facilities: Sequence[Facility],
    radius_m: int,
    locale: str = "ro",
) -> ExplainPayload:
    """Round the report down to the payload shape: 1-dp scores, 10 nearest POIs."""
    rounded = SubScores(**{k: round(v, 1) for k, v in sub_scores.as_dict().items()})
    named = [f for f in facilities if f.name]
    named.sort(key=lambda f: f.distance_m)
    refs = tuple(
        FacilityRef(name=f.name, category=f.category.value, distance_m=int(round(f.distance_m)))
        for f in named[:MAX_PAYLOAD_FACILITIES]
    )
    return ExplainPayload(
        sub_scores=rounded,
        aggregate=aggregate,
        top_facilities=refs,
        routes=tuple(summary.routes),
        radius_m=int(radius_m),
        locale=locale,
    )


@dataclass(frozen=True)
class Explanation:
    text: str
    word_count: int
    source: ExplanationSource
    grounded: bool
    generated_at: datetime

    def __post_init__(self) -> None:
        if self.word_count > MAX_EXPLANATION_WORDS:
            raise ValueError(f"explanation exceeds {MAX_EXPLANATION_WORDS} words")
        if not self.grounded:
            raise ValueError("ungrounded explanations must not be constructed")


def word_count(text: str) -> int:
    return len(text.split())


def quantize(value: float) -> float:
    """Numbers compare equal after rounding to one decimal."""
    return round(float(value) + 0.0, 1) if math.isfinite(value) else value
