"""Jittered exponential backoff for transient provider failures."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable, Type

from ..errors import ProviderUnavailable


@dataclass(frozen=True)
class BackoffPolicy:
    base_delay_s: float = 0.2
    multiplier: float = 2.0
    max_attempts: int = 3

    def __post_init__(self) -> None:
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be >= 1")
        if self.base_delay_s < 0 or self.multiplier <= 0:
            raise ValueError("invalid backoff parameters")


def backoff_delay(attempt: int, policy: BackoffPolicy, draw: float) -> float:
    """Full-jitter delay before retrying ``attempt`` (1-based): draw scales the
    exponential envelope, so the wait is uniform over [0, base * mult^(n-1))."""
    if not 1 <= attempt <= policy.max_attempts:
        raise ValueError(f"attempt {attempt} outside [1, {policy.max_attempts}]")
    if not 0.0 <= draw < 1.0 + 1e-12:
        raise ValueError("draw must be a uniform sample from [0, 1)")
    return draw * policy.base_delay_s * policy.multiplier ** (attempt - 1)


def call_with_retries(
    fn: Callable,
    policy: BackoffPolicy,
    rng: Callable[[], float] = random.random,
    sleep: Callable[[float], None] = time.sleep,
    retry_on: tuple[Type[BaseException], ...] = (ProviderUnavailable,),
):
    """Run ``fn`` with up to ``max_attempts`` tries, sleeping a jittered delay
    between attempts. The last failure is re-raised unchanged."""
    for attempt in range(1, policy.max_attempts + 1):
        try:
            return fn()
        except retry_on:
            if attempt == policy.max_attempts:
                raise
            sleep(backoff_delay(attempt, policy, rng()))
