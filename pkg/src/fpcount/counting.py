"""Function-point count of a task from its effort factor, tool inertia and estimate.

The count is

    N = C**i / (K * (P - O + 1)) * (O + 4*MP + P) / 6

Both the estimate form and the standard-deviation form run through one kernel
written in terms of ``sigma = (P - O) / 6``, so the two agree bit for bit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .catalog import Hours
from .errors import DomainError, ValidationError
from .estimation import EstimateTriple


@dataclass(frozen=True)
class CountContext:
    """Effort factor ``C``, inertia of development ``i`` and contractual divisor ``K``."""

    C: float
    i: float
    K: float = 1.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.C) and self.C > 0):
            raise ValidationError(f"effort factor C must be > 0, got {self.C}")
        if not 0 <= self.i <= 1:
            raise ValidationError(f"inertia i must lie in [0, 1], got {self.i}")
        if not (math.isfinite(self.K) and self.K > 0):
            raise ValidationError(f"contractual adjustment K must be > 0, got {self.K}")

    @property
    def effective_effort(self) -> float:
        return self.C**self.i


@dataclass(frozen=True)
class CountResult:
    N: float
    effective_effort: float
    time_T: Hours
    span: Hours


def _count(ctx: CountContext, o: Hours, mp: Hours, sigma: Hours) -> CountResult:
    p = o + 6 * sigma
    span = 6 * sigma + 1
    effort = ctx.effective_effort
    time_t = (o + 4 * mp + p) / 6
    return CountResult(effort * time_t / (ctx.K * span), effort, time_t, span)


def count_points(ctx: CountContext, est: EstimateTriple) -> CountResult:
    o, mp, p = est
    return _count(ctx, o, mp, (p - o) / 6)


def count_points_sigma(ctx: CountContext, optimistic: Hours, most_likely: Hours, sigma: Hours) -> CountResult:
    """Count from ``O``, ``MP`` and the standard deviation, with ``P = O + 6*sigma``."""
    if not sigma >= 0:
        raise DomainError(f"sigma must be >= 0, got {sigma}")
    if not 0 <= optimistic <= most_likely <= optimistic + 6 * sigma:
        raise ValidationError("estimate must satisfy 0 <= O <= MP <= O + 6*sigma")
    return _count(ctx, optimistic, most_likely, sigma)


# (lower bound, multiplier); each band runs up to the next lower bound.
_QUANTITY_BANDS = ((1000, 16), (500, 8), (100, 4), (60, 3), (10, 2), (1, 1))


def quantity_bucket(n: int) -> int:
    """Multiplier for a volume of pages, images or videos."""
    if isinstance(n, bool) or not isinstance(n, int):
        raise DomainError(f"item count must be an integer, got {n!r}")
    for lower, multiplier in _QUANTITY_BANDS:
        if n >= lower:
            return multiplier
    raise DomainError(f"item count must be >= 1, got {n}")


def marginal_points(ctx: CountContext, est: EstimateTriple) -> float:
    """Points gained per extra hour of most-likely time, ``dN/dMP``."""
    span = 6 * ((est.pessimistic - est.optimistic) / 6) + 1
    return 2 * ctx.effective_effort / (3 * ctx.K * span)


class Direction(str, Enum):
    ADD = "add"
    SUBTRACT = "subtract"

    @property
    def sign(self) -> int:
        return 1 if self is Direction.ADD else -1


def gauge_points(ctx: CountContext, est: EstimateTriple, hours: Hours, direction: Direction | str = Direction.ADD) -> float:
    """Count after moving the most-likely time by ``hours`` once the task is done."""
    direction = Direction(direction)
    if not (math.isfinite(hours) and hours >= 0):
        raise DomainError(f"gauge hours must be >= 0, got {hours}")
    if direction is Direction.SUBTRACT and est.most_likely - hours < 0:
        raise DomainError(f"gauge exceeds counted work: cannot subtract {hours} h from MP={est.most_likely} h")
    base = count_points(ctx, est)
    o, mp, p = est
    numerator = o + 4 * mp + p + direction.sign * 4 * hours
    gauged = base.effective_effort / (ctx.K * base.span) * numerator / 6
    if gauged < 0:
        raise DomainError(f"gauge exceeds counted work: gauged count {gauged} is negative")
    return gauged
