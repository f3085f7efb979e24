"""Assembly of a running stack (transport, resilience, store, engine) from config."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable

from ..explain import ChatCompletionClient, ExplanationService
from ..geodata.transport import FixtureTransport, HttpTransport, Transport
from ..persistence import Store, open_store
from ..resilience import BreakerRegistry, ResilientTransport, TwoTierCache
from ..resilience.cache import CacheStore
from .config import AppConfig
from .engine import EvaluationEngine


@dataclass
class Runtime:
    config: AppConfig
    engine: EvaluationEngine
    store: Store
    transport: ResilientTransport
    breakers: BreakerRegistry

    def close(self) -> None:
        self.engine.close()
        self.store.close()


def build_transport(config: AppConfig) -> Transport:
    providers = config.providers
    if providers.mode == "fixture":
        return FixtureTransport(providers.fixtures_dir)
    if providers.mode == "http":
        return HttpTransport(
            base_urls=providers.base_urls,
            api_keys=providers.api_keys,
            timeout_s=providers.timeout_s,
        )
    raise ValueError(f"unknown provider mode: {providers.mode}")


def build_runtime(
    config: AppConfig,
    inner_transport: Transport | None = None,
    shared_cache: CacheStore | None = None,
    listener: Callable[[dict], None] | None = None,
    clock: Callable[[], float] = time.monotonic,
    compute_delay_s: float = 0.0,
    rng: Callable[[], float] | None = None,
    sleep: Callable[[float], None] | None = None,
) -> Runtime:
    inner = inner_transport if inner_transport is not None else build_transport(config)
    breakers = BreakerRegistry(config.breaker, clock=clock)
    transport = ResilientTransport(
        inner,
        cache=TwoTierCache(shared=shared_cache, clock=clock),
        cache_policy=config.cache,
        breakers=breakers,
        backoff=config.backoff,
        rng=rng or random.random,
        sleep=sleep or time.sleep,
        listener=listener,
        clock=clock,
    )
    store = open_store(
        backend=config.storage.backend,
        path=config.storage.path,
        url=config.storage.url,
    )
    remote = None
    if config.explain.remote_url:
        remote = ChatCompletionClient(
            url=config.explain.remote_url,
            api_key=config.explain.api_key,
            model=config.explain.model,
        )
    explain_service = ExplanationService(remote=remote, ttl_s=config.explain.cache_ttl_s)
    engine = EvaluationEngine(
        transport,
        store,
        config,
        explain_service=explain_service,
        clock=clock,
        compute_delay_s=compute_delay_s,
    )
    return Runtime(config=config, engine=engine, store=store,
                   transport=transport, breakers=breakers)
