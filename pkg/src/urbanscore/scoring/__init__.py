"""Pure scoring: six sub-scores and the preference-weighted aggregate."""

from .calibration import CalibrationConstants, PollutantModel
from .subscores import (
    air_score,
    education_score,
    lifestyle_score,
    metro_score,
    shannon_entropy,
    surface_score,
    traffic_point_score,
    traffic_score,
)
from .weights import (
    DEFAULT_WEIGHTS,
    SUBSCORE_KEYS,
    WEIGHT_CEIL,
    WEIGHT_FLOOR,
    PreferenceProfile,
    SubScores,
    aggregate,
    normalize_weights,
)

__all__ = [
    "CalibrationConstants",
    "PollutantModel",
    "DEFAULT_WEIGHTS",
    "SUBSCORE_KEYS",
    "WEIGHT_CEIL",
    "WEIGHT_FLOOR",
    "PreferenceProfile",
    "SubScores",
    "aggregate",
    "air_score",
    "education_score",
    "lifestyle_score",
    "metro_score",
    "normalize_weights",
    "shannon_entropy",
    "surface_score",
    "traffic_point_score",
    "traffic_score",
]
