"""Command-line interface: evaluate, batch, calibrate, serve, stats."""

from __future__ import annotations

import json
import re
import statistics
import sys
from pathlib import Path

import click

from ..errors import UrbanScoreError
from ..geo import GeoPoint
from ..geodata import facilities as facility_feed
from ..geodata import geocoding
from ..scoring.weights import SUBSCORE_KEYS, PreferenceProfile
from .calibrate import calibrate_constants
from .config import AppConfig, load_config, write_config
from .engine import EvaluateRequest
from .http import create_app, report_to_dict
from .runtime import Runtime, build_runtime, build_transport
from .stats import compute_stats

_COORD_RE = re.compile(r"^\s*(-?\d+(?:\.\d+)?)\s*,\s*(-?\d+(?:\.\d+)?)\s*$")


def _parse_target(target: str) -> dict:
    match = _COORD_RE.match(target)
    if match:
        return {"point": GeoPoint(float(match.group(1)), float(match.group(2)))}
    return {"address": target}


def _load_profile(path: str | None) -> PreferenceProfile | None:
    if path is None:
        return None
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    weights = raw.get("weights")
    if isinstance(weights, dict):
        weights = [weights[k] for k in SUBSCORE_KEYS]
    return PreferenceProfile(
        weights=tuple(float(w) for w in weights),
        traffic_sensitive=bool(raw.get("traffic_sensitive", False)),
    )


def _runtime(config_path: str | None, fixtures: str | None) -> Runtime:
    config = load_config(config_path)
    if fixtures is not None:
        from dataclasses import replace

        config = replace(
            config, providers=replace(config.providers, mode="fixture", fixtures_dir=fixtures)
        )
    return build_runtime(config)


def _print_report(report_dict: dict, as_json: bool) -> None:
    if as_json:
        click.echo(json.dumps(report_dict, ensure_ascii=False, indent=2))
        return
    click.echo(f"{report_dict['location']['display_name']}")
    click.echo(f"aggregate: {report_dict['aggregate']}")
    for key, value in report_dict["sub_scores"].items():
        click.echo(f"  {key:>10}: {value:.1f}")
    if report_dict["degraded"]:
        click.echo(f"degraded feeds: {', '.join(report_dict['degraded'])}")
    click.echo(report_dict["explanation"]["text"])


@click.group()
def main():
    """Address-level liveability scoring."""


@main.command()
@click.argument("target")
@click.option("--radius", default=800, show_default=True, help="Search radius in meters.")
@click.option("--profile", "profile_path", type=click.Path(exists=True),
              help="JSON file with weights and traffic_sensitive.")
@click.option("--fixtures", type=click.Path(exists=True),
              help="Replay providers from this fixture directory.")
@click.option("--config", "config_path", type=click.Path(exists=True))
@click.option("--json", "as_json", is_flag=True, help="Print the full report as JSON.")
def evaluate(target, radius, profile_path, fixtures, config_path, as_json):
    """Evaluate one ADDRESS or "lat,lon" pair."""
    runtime = _runtime(config_path, fixtures)
    try:
        request = EvaluateRequest(
            radius_m=radius, profile=_load_profile(profile_path), **_parse_target(target)
        )
        report = runtime.engine.evaluate(request)
        _print_report(report_to_dict(report), as_json)
    except UrbanScoreError as exc:
        raise click.ClickException(str(exc))
    finally:
        runtime.close()


@main.command()
@click.argument("requests_file", type=click.Path(exists=True))
@click.option("--radius", default=800, show_default=True)
@click.option("--fixtures", type=click.Path(exists=True))
@click.option("--config", "config_path", type=click.Path(exists=True))
def batch(requests_file, radius, fixtures, config_path):
    """Evaluate one request per line; print per-line results and latency summary."""
    runtime = _runtime(config_path, fixtures)
    latencies = []
    failures = 0
    try:
        for line in Path(requests_file).read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                report = runtime.engine.evaluate(
                    EvaluateRequest(radius_m=radius, **_parse_target(line))
                )
            except UrbanScoreError as exc:
                failures += 1
                click.echo(f"FAIL {line}: {exc}")
                continue
            latency = report.timings_ms["total_ms"]
            latencies.append(latency)
            degraded = f" degraded={','.join(sorted(report.degraded))}" if report.degraded else ""
            click.echo(f"{report.aggregate:>3} {latency:7.1f}ms {line}{degraded}")
    finally:
        runtime.close()
    if latencies:
        ordered = sorted(latencies)
        p95 = ordered[min(len(ordered) - 1, int(round(0.95 * (len(ordered) + 1))) - 1)]
        click.echo(
            f"\n{len(latencies)} evaluations, {failures} failures; "
            f"median {statistics.median(ordered):.1f} ms, p95 {p95:.1f} ms"
        )
    elif failures:
        sys.exit(1)


@main.command()
@click.option("--fixtures", required=True, type=click.Path(exists=True))
@click.option("--targets", "targets_path", required=True, type=click.Path(exists=True),
              help="JSON: {address|point, radius_m, targets:{lifestyle,...}}.")
@click.option("--config", "config_path", type=click.Path(exists=True))
@click.option("--out", "out_path", default="urbanscore.calibrated.json", show_default=True,
              help="Where to write the frozen config.")
def calibrate(fixtures, targets_path, config_path, out_path):
    """Grid-search scoring constants to match target sub-scores on a fixture."""
    from dataclasses import replace

    config = load_config(config_path)
    config = replace(
        config, providers=replace(config.providers, mode="fixture", fixtures_dir=fixtures)
    )
    with open(targets_path, encoding="utf-8") as fh:
        spec = json.load(fh)

    transport = build_transport(config)
    if "address" in spec:
        address = geocoding.geocode_forward(transport, spec["address"])
        center = address.point
    else:
        center = GeoPoint(spec["point"]["lat"], spec["point"]["lon"])
    radius = int(spec.get("radius_m", config.service.default_radius_m))
    raw = facility_feed.fetch_facilities(transport, center, radius, config.education_keywords)
    summary = facility_feed.summarize_facilities(facility_feed.dedupe_facilities(raw))

    result = calibrate_constants(summary, spec["targets"], config.calibration)
    frozen = replace(config, calibration=result.constants)
    write_config(frozen, out_path)

    click.echo(f"frozen constants written to {out_path}")
    for key in sorted(result.targets):
        click.echo(
            f"  {key:>10}: achieved {result.achieved[key]:6.2f}  target {result.targets[key]:6.2f}"
        )


@main.command()
@click.option("--port", default=None, type=int)
@click.option("--config", "config_path", type=click.Path(exists=True))
@click.option("--fixtures", type=click.Path(exists=True))
def serve(port, config_path, fixtures):
    """Run the HTTP API."""
    import logging
    import uvicorn

    logging.basicConfig(
        level=logging.INFO,
        format="%(asctime)s %(name)s %(message)s",
    )
    runtime = _runtime(config_path, fixtures)
    app = create_app(runtime)
    try:
        uvicorn.run(app, host="0.0.0.0", port=port or runtime.config.service.port)
    finally:
        runtime.close()


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True))
@click.option("--since", default=None)
@click.option("--until", default=None)
def stats(config_path, since, until):
    """Print usage statistics from the persisted history."""
    from datetime import datetime, timezone

    def parse(raw):
        if raw is None:
            return None
        parsed = datetime.fromisoformat(raw.replace("Z", "+00:00"))
        return parsed if parsed.tzinfo else parsed.replace(tzinfo=timezone.utc)

    runtime = _runtime(config_path, None)
    try:
        report = compute_stats(runtime.store, parse(since), parse(until))
    finally:
        runtime.close()
    click.echo("top districts:")
    for district, share in report.top_districts:
        click.echo(f"  {share:6.1%}  {district}")
    click.echo(f"amenity preference order: {', '.join(report.amenity_preference_order) or '-'}")
    click.echo("declared purposes:")
    for purpose, share in sorted(report.purpose_distribution.items()):
        click.echo(f"  {share:6.1%}  {purpose}")


if __name__ == "__main__":
    main()
