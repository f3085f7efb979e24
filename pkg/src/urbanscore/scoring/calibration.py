"""Calibration constants and the pollutant guideline model.

Both load from the application config file; the defaults below are the frozen
values produced by `urbanscore calibrate` against the reference fixture set.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from ..geodata.types import FacilityCategory, Pollutant

# WHO 2021 24-hour guideline values, µg/m³ (O3 is the 8-hour value, CO the
# 4 mg/m³ figure expressed in µg/m³). Ammonia has no WHO guideline; 100 µg/m³
# is a conservative placeholder. All configurable as calibration inputs.
DEFAULT_THRESHOLDS = {
    Pollutant.PM25: 15.0,
    Pollutant.PM10: 45.0,
    Pollutant.CO: 4000.0,
    Pollutant.NO2: 25.0,
    Pollutant.O3: 100.0,
    Pollutant.NH3: 100.0,
}

DEFAULT_POLLUTANT_WEIGHTS = {
    Pollutant.PM25: 0.30,
    Pollutant.PM10: 0.20,
    Pollutant.CO: 0.05,
    Pollutant.NO2: 0.05,
    Pollutant.O3: 0.05,
    Pollutant.NH3: 0.05,
}


@dataclass(frozen=True)
class PollutantModel:
    weights: dict[Pollutant, float] = field(default_factory=lambda: dict(DEFAULT_POLLUTANT_WEIGHTS))
    thresholds: dict[Pollutant, float] = field(default_factory=lambda: dict(DEFAULT_THRESHOLDS))

    def __post_init__(self) -> None:
        if any(w <= 0 for w in self.weights.values()):
            raise ValueError("pollutant weights must be > 0")
        if any(t <= 0 for t in self.thresholds.values()):
            raise ValueError("pollutant thresholds must be > 0")

    def to_dict(self) -> dict:
        return {
            "weights": {p.value: w for p, w in self.weights.items()},
            "thresholds": {p.value: t for p, t in self.thresholds.items()},
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "PollutantModel":
        weights = {Pollutant(k): float(v) for k, v in raw.get("weights", {}).items()}
        thresholds = {Pollutant(k): float(v) for k, v in raw.get("thresholds", {}).items()}
        return cls(
            weights={**DEFAULT_POLLUTANT_WEIGHTS, **weights},
            thresholds={**DEFAULT_THRESHOLDS, **thresholds},
        )


DEFAULT_EDUCATION_TYPE_WEIGHTS = {
    FacilityCategory.KINDERGARTEN: 0.25,
    FacilityCategory.PRIMARY_SCHOOL: 0.40,
    FacilityCategory.HIGH_SCHOOL: 0.60,
}


@dataclass(frozen=True)
class CalibrationConstants:
    """Scaling constants for the lifestyle/education/metro/surface sub-scores."""

    lifestyle_count_ref: int = 60
    lifestyle_count_weight: float = 0.6
    lifestyle_entropy_weight: float = 0.4
    education_type_weights: dict[FacilityCategory, float] = field(
        default_factory=lambda: dict(DEFAULT_EDUCATION_TYPE_WEIGHTS)
    )
    education_decay_m: float = 1000.0
    metro_full_m: float = 200.0
    metro_zero_m: float = 1000.0
    surface_k: float = 26.5
    surface_ref_routes: int = 8

    def __post_init__(self) -> None:
        if self.lifestyle_count_ref <= 0 or self.education_decay_m <= 0 or self.surface_k <= 0:
            raise ValueError("calibration constants must be positive")
        if not self.metro_full_m < self.metro_zero_m:
            raise ValueError("metro_full_m must be below metro_zero_m")
        mix = self.lifestyle_count_weight + self.lifestyle_entropy_weight
        if abs(mix - 1.0) > 1e-9:
            raise ValueError("lifestyle mix weights must sum to 1")

    def with_updates(self, **changes) -> "CalibrationConstants":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return {
            "lifestyle_count_ref": self.lifestyle_count_ref,
            "lifestyle_count_weight": self.lifestyle_count_weight,
            "lifestyle_entropy_weight": self.lifestyle_entropy_weight,
            "education_type_weights": {c.value: w for c, w in self.education_type_weights.items()},
            "education_decay_m": self.education_decay_m,
            "metro_full_m": self.metro_full_m,
            "metro_zero_m": self.metro_zero_m,
            "surface_k": self.surface_k,
            "surface_ref_routes": self.surface_ref_routes,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "CalibrationConstants":
        kwargs = dict(raw)
        if "education_type_weights" in kwargs:
            kwargs["education_type_weights"] = {
                FacilityCategory(k): float(v)
                for k, v in kwargs["education_type_weights"].items()
            }
        return cls(**kwargs)
