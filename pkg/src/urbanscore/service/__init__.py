"""Evaluation orchestration, HTTP API, statistics and CLI."""

from .config import AppConfig, load_config, write_config
from .engine import EvaluateRequest, EvaluationEngine, ScoreReport
from .http import create_app, report_to_dict
from .runtime import Runtime, build_runtime, build_transport
from .stats import StatsReport, compute_stats

__all__ = [
    "AppConfig",
    "EvaluateRequest",
    "EvaluationEngine",
    "Runtime",
    "ScoreReport",
    "StatsReport",
    "build_runtime",
    "build_transport",
    "compute_stats",
    "create_app",
    "load_config",
    "report_to_dict",
    "write_config",
]
