"""Lagrangian diagnostics of a count and the curve sweeps built on them.

The most-likely time plays the role of the time coordinate: ``N`` is affine
in ``MP``, ``N_dot = dN/dMP`` is constant, the current ``J = 4*C**i/(P-O+1)**2``
carries no ``K``, and the potential is whatever makes ``N*N_dot**2/2 + V = J``.
"""
from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, replace
from enum import Enum
from typing import Sequence

from .catalog import Hours
from .counting import CountContext, count_points, marginal_points
from .errors import DomainError, ValidationError
from .estimation import EstimateTriple


@dataclass(frozen=True)
class DynamicsState:
    N: float
    N_dot: float
    L: float
    V: float
    J: float

    @property
    def kinetic(self) -> float:
        return 0.5 * self.N * self.N_dot**2


def n_dot(ctx: CountContext, est: EstimateTriple) -> float:
    return marginal_points(ctx, est)


def conserved_current(ctx: CountContext, est: EstimateTriple) -> float:
    span = est.pessimistic - est.optimistic + 1
    return 4 * ctx.effective_effort / span**2


def potential(ctx: CountContext, est: EstimateTriple) -> float:
    """``V = J - N*N_dot**2/2``; negative values flag an unproductive tool/effort/time mix."""
    n = count_points(ctx, est).N
    rate = n_dot(ctx, est)
    return conserved_current(ctx, est) - 0.5 * n * rate**2


def lagrangian(ctx: CountContext, est: EstimateTriple) -> DynamicsState:
    n = count_points(ctx, est).N
    rate = n_dot(ctx, est)
    j = conserved_current(ctx, est)
    kinetic = 0.5 * n * rate**2
    v = j - kinetic
    return DynamicsState(N=n, N_dot=rate, L=kinetic - v, V=v, J=j)


@dataclass(frozen=True)
class EulerLagrangeCheck:
    """Finite-difference and closed-form pieces of the Euler-Lagrange equation.

    ``momentum_*`` is dL/dN_dot, ``force_*`` is dL/dN (potential held fixed),
    ``momentum_rate`` is the MP-derivative of the momentum along the count.
    ``residual`` is ``|momentum_rate - force_numeric|``; ``analytic_residual``
    is ``-N_dot**2/2``, the value obtained when the momentum is taken as
    constant in time. ``energy_drift`` and ``current_drift`` are MP-derivatives
    of ``N*N_dot**2/2 + V`` and of ``J``.
    """

    h: float
    momentum_numeric: float
    momentum_analytic: float
    force_numeric: float
    force_analytic: float
    momentum_rate: float
    residual: float
    analytic_residual: float
    energy_drift: float
    current_drift: float


def euler_lagrange_residual(ctx: CountContext, est: EstimateTriple, h: Hours) -> EulerLagrangeCheck:
    if not h > 0:
        raise DomainError(f"step h must be > 0, got {h}")
    o, mp, p = est
    if mp - h < o or mp + h > p:
        raise DomainError(f"MP +/- h = [{mp - h}, {mp + h}] leaves the estimate interval [{o}, {p}]")
    state = lagrangian(ctx, est)

    def lag(n: float, rate: float) -> float:
        return 0.5 * n * rate**2 - state.V

    momentum_numeric = (lag(state.N, state.N_dot + h) - lag(state.N, state.N_dot - h)) / (2 * h)
    force_numeric = (lag(state.N + h, state.N_dot) - lag(state.N - h, state.N_dot)) / (2 * h)

    before = lagrangian(ctx, replace(est, most_likely=mp - h))
    after = lagrangian(ctx, replace(est, most_likely=mp + h))
    momentum_rate = (after.N * after.N_dot - before.N * before.N_dot) / (2 * h)
    energy_drift = ((after.kinetic + after.V) - (before.kinetic + before.V)) / (2 * h)
    current_drift = (after.J - before.J) / (2 * h)

    return EulerLagrangeCheck(
        h=h,
        momentum_numeric=momentum_numeric,
        momentum_analytic=state.N * state.N_dot,
        force_numeric=force_numeric,
        force_analytic=0.5 * state.N_dot**2,
        momentum_rate=momentum_rate,
        residual=abs(momentum_rate - force_numeric),
        analytic_residual=-0.5 * state.N_dot**2,
        energy_drift=energy_drift,
        current_drift=current_drift,
    )


class SweepVariable(str, Enum):
    INERTIA = "inertia"
    MOST_LIKELY = "most_likely"
    BOTH = "both"


DEFAULT_INERTIA_GRID = tuple(round(0.1 * k, 10) for k in range(11))
DEFAULT_MP_GRID = tuple(float(h) for h in range(1, 21))
DEFAULT_K_VALUES = (0.5, 1.0, 2.0)


@dataclass(frozen=True)
class CurveSpec:
    """A grid over inertia and/or most-likely time, repeated for each ``K``.

    ``context`` and ``estimate`` supply the fixed values; the swept fields are
    overwritten point by point, and ``K`` always comes from ``K_values``.
    """

    sweep_variable: SweepVariable
    context: CountContext
    estimate: EstimateTriple
    inertia_grid: tuple[float, ...] = DEFAULT_INERTIA_GRID
    mp_grid: tuple[Hours, ...] = DEFAULT_MP_GRID
    K_values: tuple[float, ...] = DEFAULT_K_VALUES

    def __post_init__(self) -> None:
        object.__setattr__(self, "sweep_variable", SweepVariable(self.sweep_variable))
        grids = []
        if self.sweep_variable in (SweepVariable.INERTIA, SweepVariable.BOTH):
            grids.append(("inertia", self.inertia_grid))
            if any(not 0 <= x <= 1 for x in self.inertia_grid):
                raise ValidationError("inertia grid must lie within [0, 1]")
        if self.sweep_variable in (SweepVariable.MOST_LIKELY, SweepVariable.BOTH):
            grids.append(("most_likely", self.mp_grid))
            o, _, p = self.estimate
            if any(not o <= x <= p for x in self.mp_grid):
                raise ValidationError(f"most-likely grid must lie within [O, P] = [{o}, {p}]")
        for name, grid in grids:
            if not grid:
                raise ValidationError(f"{name} grid is empty")
            if any(b <= a for a, b in zip(grid, grid[1:])):
                raise ValidationError(f"{name} grid must be strictly increasing")
        if not self.K_values:
            raise ValidationError("K_values is empty")
        if any(not k > 0 for k in self.K_values):
            raise ValidationError("every K must be > 0")


def figure_spec(figure: int, K_values: Sequence[float] = DEFAULT_K_VALUES) -> CurveSpec:
    """Default sweeps: figures 1 and 2 over inertia, figure 3 over inertia and MP.

    The form-elaboration case (C=5.8, estimate 2/6/8 h) anchors figures 1-2.
    Figure 3 fixes O=1 h and P=20 h so that MP can run over 1..20 h.
    """
    ctx = CountContext(C=5.8, i=1.0, K=1.0)
    if figure in (1, 2):
        return CurveSpec(SweepVariable.INERTIA, ctx, EstimateTriple(2.0, 6.0, 8.0), K_values=tuple(K_values))
    if figure == 3:
        return CurveSpec(SweepVariable.BOTH, ctx, EstimateTriple(1.0, 1.0, 20.0), K_values=tuple(K_values))
    raise DomainError(f"no default sweep for figure {figure}")


@dataclass(frozen=True)
class SweepRow:
    sweep_var: str
    value: str
    K: float
    N: float
    V: float
    inertia: float
    most_likely: Hours


def _fmt(x: float) -> str:
    return repr(float(x))


def sweep(spec: CurveSpec) -> list[SweepRow]:
    """Evaluate N and V on every grid point, grid-major with K innermost."""
    var = spec.sweep_variable
    if var is SweepVariable.INERTIA:
        points = [(i, spec.estimate.most_likely) for i in spec.inertia_grid]
    elif var is SweepVariable.MOST_LIKELY:
        points = [(spec.context.i, mp) for mp in spec.mp_grid]
    else:
        points = list(itertools.product(spec.inertia_grid, spec.mp_grid))

    rows = []
    for (i, mp), k in itertools.product(points, spec.K_values):
        ctx = CountContext(spec.context.C, i, k)
        est = replace(spec.estimate, most_likely=mp)
        if var is SweepVariable.INERTIA:
            label, value = "inertia", _fmt(i)
        elif var is SweepVariable.MOST_LIKELY:
            label, value = "most_likely", _fmt(mp)
        else:
            label, value = "inertia|most_likely", f"{_fmt(i)}|{_fmt(mp)}"
        rows.append(SweepRow(label, value, k, count_points(ctx, est).N, potential(ctx, est), i, mp))
    return rows


SWEEP_HEADER = ("sweep_var", "value", "K", "N", "V")


def sweep_csv(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for row in rows:
        writer.writerow((row.sweep_var, row.value, _fmt(row.K), _fmt(row.N), _fmt(row.V)))
    return buf.getvalue()
