"""Grounded plain-language explanations of score reports."""

from .grounding import ground_check, grounding_vocabulary
from .payload import (
    Explanation,
    ExplanationSource,
    ExplainPayload,
    FacilityRef,
    build_payload,
)
from .service import (
    ChatCompletionClient,
    ExplanationService,
    RemoteGenerator,
    build_prompt,
    profile_hash,
)
from .template import render_template, tone_band

__all__ = [
    "ChatCompletionClient",
    "ExplainPayload",
    "Explanation",
    "ExplanationService",
    "ExplanationSource",
    "FacilityRef",
    "RemoteGenerator",
    "build_payload",
    "build_prompt",
    "ground_check",
    "grounding_vocabulary",
    "profile_hash",
    "render_template",
    "tone_band",
]
