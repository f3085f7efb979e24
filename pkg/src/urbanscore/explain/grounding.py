"""Lexical grounding: every number or route named in a narrative must exist in
the payload it was generated from. Cheap, deterministic, testable."""

from __future__ import annotations

import re

from .payload import ExplainPayload, quantize

_NUMBER = re.compile(r"\d+(?:[.,]\d+)?")
# letter/digit mixtures like N41 or 23b read as route identifiers
_ROUTE_TOKEN = re.compile(r"\b(?=\w*\d)(?=\w*[A-Za-z])\w+\b", re.UNICODE)


def grounding_vocabulary(payload: ExplainPayload) -> tuple[set[float], set[str]]:
    """Numbers and identifier tokens a narrative is allowed to quote."""
    numbers: set[float] = set()
    tokens: set[str] = set()

    for value in payload.sub_scores.as_tuple():
        numbers.add(quantize(value))
    numbers.add(quantize(payload.aggregate))
    numbers.add(quantize(payload.radius_m))

    texts: list[str] = []
    for ref in payload.top_facilities:
        numbers.add(quantize(ref.distance_m))
        texts.append(ref.name)
    for route in payload.routes:
        tokens.add(route.casefold())
        texts.append(route)

    # numbers and mixed tokens inside names/route ids ("Şcoala 97", line "23b")
    for text in texts:
        for token in _NUMBER.findall(text):
            numbers.add(quantize(float(token.replace(",", "."))))
        for token in _ROUTE_TOKEN.findall(text):
            tokens.add(token.casefold())

    return numbers, tokens


def ground_check(text: str, payload: ExplainPayload) -> tuple[bool, list[str]]:
    """Check all numeric and route-like tokens in ``text`` against the payload.

    Numbers match after rounding to one decimal; a bare number also passes if
    it is literally one of the payload's route identifiers. Text without any
    such token is vacuously grounded.
    """
    numbers, tokens = grounding_vocabulary(payload)
    ungrounded: list[str] = []

    for token in _NUMBER.findall(text):
        value = quantize(float(token.replace(",", ".")))
        if value not in numbers and token.casefold() not in tokens:
            ungrounded.append(token)

    for token in _ROUTE_TOKEN.findall(text):
        if token.casefold() not in tokens:
            ungrounded.append(token)

    return (not ungrounded, ungrounded)
