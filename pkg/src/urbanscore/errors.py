"""Exception hierarchy shared across the package."""


class UrbanScoreError(Exception):
    """Base class for all domain errors."""


class InvalidRequest(UrbanScoreError, ValueError):
    """A precondition on caller-supplied input was violated."""


class NotFound(UrbanScoreError):
    """Provider answered, but there is no result for the query."""


class ProviderUnavailable(UrbanScoreError):
    """Transport failure or provider-side error after retries."""


class MalformedResponse(UrbanScoreError):
    """Provider body could not be parsed into the expected shape."""


class NoSegment(UrbanScoreError):
    """No road segment near the sampled point; treat the sample as missing."""


class NoData(UrbanScoreError):
    """A score was requested but no usable observations exist."""


class InvalidSample(UrbanScoreError):
    """Traffic sample has a non-positive denominator."""


class InfeasibleProfile(UrbanScoreError):
    """Weight normalization could not satisfy the [floor, ceiling] bounds."""


class Unavailable(UrbanScoreError):
    """Fetch failed (or was denied by the breaker) and no cache entry exists."""


class GeocodeFailed(UrbanScoreError):
    """Address resolution failed; nothing else was attempted."""


class StorageUnavailable(UrbanScoreError):
    """The persistence backend rejected or could not service the operation."""


class UnknownLocation(UrbanScoreError):
    """Referenced location id does not exist."""


class UnknownRecord(UrbanScoreError):
    """Referenced row (favourite, user, ...) does not exist."""


class DuplicateRecord(UrbanScoreError):
    """Uniqueness constraint would be violated."""
