"""Function-point counting for tasks that classical counting cannot measure."""
from .catalog import (
    ComplexityLevel,
    EffortFactorTable,
    FactorTables,
    InertiaTable,
    PriceSchedule,
    TaskCatalogEntry,
    default_catalog,
    default_factors,
    format_duration,
    load_factor_tables,
    load_task_catalog,
    parse_duration,
    productivity,
)
from .counting import (
    CountContext,
    CountResult,
    Direction,
    count_points,
    count_points_sigma,
    gauge_points,
    marginal_points,
    quantity_bucket,
)
from .dynamics import (
    CurveSpec,
    DynamicsState,
    SweepVariable,
    conserved_current,
    euler_lagrange_residual,
    figure_spec,
    lagrangian,
    n_dot,
    potential,
    sweep,
)
from .errors import DomainError, FunctionPointError, ParseError, UnknownEntryError, ValidationError
from .estimation import EstimateTriple, TimeStats, enforce_min_spread, pert_time, time_stats, variance
from .valuation import CountLine, ValuedLine, load_sheet, total_report, value_line, value_points

__version__ = "0.1.0"
