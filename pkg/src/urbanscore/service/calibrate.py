"""Grid-search calibration of the scoring constants against target sub-scores.

Given a facility summary (usually replayed from fixtures) and target values
for the facility-driven sub-scores, searches the free constants to minimize
squared error and returns the frozen set. Air and traffic have no free
constants; metro is fixed piecewise-linear, so its achieved value is reported
but nothing is searched.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..geodata.types import FacilitySummary
from ..geodata.facilities import LIFESTYLE_CATEGORIES
from ..scoring.calibration import CalibrationConstants, DEFAULT_EDUCATION_TYPE_WEIGHTS
from ..scoring.subscores import education_score, lifestyle_score, metro_score, surface_score

SURFACE_REFERENCE_SCORE = 75.0  # anchor: ~eight routes should land near 75


@dataclass(frozen=True)
class CalibrationResult:
    constants: CalibrationConstants
    achieved: dict[str, float]
    targets: dict[str, float]

    def errors(self) -> dict[str, float]:
        return {k: self.achieved[k] - self.targets[k] for k in self.targets}


def _frange(start: float, stop: float, step: float) -> list[float]:
    values = []
    value = start
    while value <= stop + 1e-9:
        values.append(round(value, 10))
        value += step
    return values


def calibrate_constants(
    summary: FacilitySummary,
    targets: dict[str, float],
    base: CalibrationConstants | None = None,
) -> CalibrationResult:
    base = base or CalibrationConstants()
    constants = base

    lifestyle_counts = {c: summary.counts.get(c, 0) for c in LIFESTYLE_CATEGORIES}

    if "lifestyle" in targets:
        best = None
        for count_ref in range(30, 125, 5):
            for count_weight in _frange(0.30, 0.80, 0.025):
                candidate = constants.with_updates(
                    lifestyle_count_ref=count_ref,
                    lifestyle_count_weight=round(count_weight, 4),
                    lifestyle_entropy_weight=round(1.0 - count_weight, 4),
                )
                err = (lifestyle_score(lifestyle_counts, candidate) - targets["lifestyle"]) ** 2
                if best is None or err < best[0]:
                    best = (err, candidate)
        constants = best[1]

    if "education" in targets:
        best = None
        for decay in range(700, 1301, 50):
            for scale in _frange(0.50, 2.00, 0.01):
                type_weights = {
                    cat: round(w * scale, 6)
                    for cat, w in DEFAULT_EDUCATION_TYPE_WEIGHTS.items()
                }
                candidate = constants.with_updates(
                    education_type_weights=type_weights,
                    education_decay_m=float(decay),
                )
                err = (education_score(summary.schools, candidate) - targets["education"]) ** 2
                if best is None or err < best[0]:
                    best = (err, candidate)
        constants = best[1]

    if "surface" in targets:
        routes = len(summary.routes)
        ref = constants.surface_ref_routes
        best = None
        for k in _frange(15.0, 40.0, 0.05):
            candidate = constants.with_updates(surface_k=round(k, 4))
            err = (surface_score(routes, candidate) - targets["surface"]) ** 2
            err += 0.25 * (surface_score(ref, candidate) - SURFACE_REFERENCE_SCORE) ** 2
            if best is None or err < best[0]:
                best = (err, candidate)
        constants = best[1]

    achieved = {
        "lifestyle": lifestyle_score(lifestyle_counts, constants),
        "education": education_score(summary.schools, constants),
        "surface": surface_score(len(summary.routes), constants),
        "metro": metro_score(summary.nearest_metro_m, constants),
    }
    return CalibrationResult(constants=constants, achieved=achieved, targets=dict(targets))
