"""Three-point (PERT) time estimates and the minimum-spread correction."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace

from .catalog import Hours, TaskCatalogEntry
from .errors import DomainError, ValidationError

log = logging.getLogger(__name__)

DEFAULT_MIN_SPREAD = 0.20


@dataclass(frozen=True)
class EstimateTriple:
    """Optimistic, most-likely and pessimistic durations, in that order."""

    optimistic: Hours
    most_likely: Hours
    pessimistic: Hours
    corrected: bool = False

    def __post_init__(self) -> None:
        values = (self.optimistic, self.most_likely, self.pessimistic)
        if not all(math.isfinite(v) for v in values):
            raise ValidationError(f"estimate contains a non-finite value: {values}")
        if not 0 <= self.optimistic <= self.most_likely <= self.pessimistic:
            raise ValidationError(f"estimate must satisfy 0 <= O <= MP <= P, got O={values[0]}, MP={values[1]}, P={values[2]}")

    @classmethod
    def from_entry(cls, entry: TaskCatalogEntry) -> "EstimateTriple":
        return cls(entry.optimistic, entry.most_likely, entry.pessimistic)

    def __iter__(self):
        # Unpacks as (O, MP, P).
        return iter((self.optimistic, self.most_likely, self.pessimistic))


@dataclass(frozen=True)
class TimeStats:
    expected: Hours
    variance: float
    sigma: Hours


def pert_time(est: EstimateTriple) -> Hours:
    o, mp, p = est
    return (o + 4 * mp + p) / 6


def variance(est: EstimateTriple) -> tuple[float, Hours]:
    """Return ``(sigma**2, sigma)`` with ``sigma = (P - O) / 6``."""
    sigma = (est.pessimistic - est.optimistic) / 6
    return sigma * sigma, sigma


def time_stats(est: EstimateTriple) -> TimeStats:
    sigma2, sigma = variance(est)
    return TimeStats(pert_time(est), sigma2, sigma)


def enforce_min_spread(est: EstimateTriple, min_ratio: float = DEFAULT_MIN_SPREAD) -> EstimateTriple:
    """Widen a triple whose pessimistic bound is within ``min_ratio`` of the optimistic one.

    When ``P < O * (1 + min_ratio)`` the pessimistic bound becomes
    ``O * (1 + min_ratio)`` and the most-likely value is reset to the midpoint
    of the widened interval. Otherwise the triple is returned unchanged.
    """
    if not min_ratio >= 0:
        raise DomainError(f"min_ratio must be >= 0, got {min_ratio}")
    o, _, p = est
    if o == 0 and p == 0:
        log.warning("min-spread correction on an all-zero estimate leaves it at zero")
    floor = o * (1 + min_ratio)
    if p >= floor:
        return est
    return replace(est, most_likely=(o + floor) / 2, pessimistic=floor, corrected=True)
