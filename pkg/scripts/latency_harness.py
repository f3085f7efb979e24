#!/usr/bin/env python3
"""Latency experiment: replay the reference per-stage delays through stub
providers and measure end-to-end evaluation wall time under concurrency.

The stubs sleep 420/610/540/330 ms (geocode/facilities/traffic/air) and the
engine injects 210 ms of synthetic compute, so a serial pipeline would need
2110 ms; the parallel fan-out should keep the median well under 1.5 s.

Usage: python3 scripts/latency_harness.py [--runs 200] [--concurrency 8]
"""

from __future__ import annotations

import argparse
import statistics
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from urbanscore.service.config import AppConfig, ServiceSettings, StorageSettings
from urbanscore.service.engine import EvaluateRequest
from urbanscore.service.runtime import build_runtime
from urbanscore.testing import SyntheticTransport

STAGE_DELAYS_S = {"geocode": 0.42, "facilities": 0.61, "traffic": 0.54, "air": 0.33}
COMPUTE_DELAY_S = 0.21
SERIAL_SUM_MS = 2110.0


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--runs", type=int, default=200)
    parser.add_argument("--concurrency", type=int, default=8)
    args = parser.parse_args()

    config = AppConfig(
        storage=StorageSettings(backend="sqlite", path=":memory:"),
        service=ServiceSettings(io_threads=args.concurrency * 7 + 8),
    )
    runtime = build_runtime(
        config,
        inner_transport=SyntheticTransport(delays_s=STAGE_DELAYS_S),
        compute_delay_s=COMPUTE_DELAY_S,
    )

    def run_one(i: int) -> float:
        t0 = time.perf_counter()
        runtime.engine.evaluate(EvaluateRequest(address=f"Strada Sintetică {i}"))
        return (time.perf_counter() - t0) * 1000.0

    try:
        started = time.perf_counter()
        with ThreadPoolExecutor(max_workers=args.concurrency) as pool:
            walls = sorted(pool.map(run_one, range(args.runs)))
        total_s = time.perf_counter() - started
    finally:
        runtime.close()

    median = statistics.median(walls)
    p95 = walls[max(0, int(0.95 * len(walls)) - 1)]
    print(f"runs={args.runs} concurrency={args.concurrency} "
          f"throughput={args.runs / total_s:.1f} eval/s")
    print(f"median {median:.0f} ms | p95 {p95:.0f} ms | max {walls[-1]:.0f} ms "
          f"| serial sum {SERIAL_SUM_MS:.0f} ms")
    ok = median < 1500.0 and walls[-1] < SERIAL_SUM_MS and p95 < 3000.0
    print("PASS" if ok else "FAIL")
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
