"""Pricing of counted points, counting sheets and report totals."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Sequence

from .catalog import (
    ComplexityLevel,
    FactorTables,
    TaskCatalogEntry,
    find_task,
    parse_duration,
)
from .counting import CountContext, count_points, quantity_bucket
from .errors import DomainError, ParseError, Problem, UnknownEntryError, ValidationError
from .estimation import DEFAULT_MIN_SPREAD, EstimateTriple, enforce_min_spread

CENT = Decimal("0.01")
POINT_PLACES = Decimal("0.0001")


def round_half_up(value: float, quantum: Decimal = CENT) -> Decimal:
    # Decimal(repr) so that e.g. 2.675 rounds as written rather than as stored.
    return Decimal(repr(float(value))).quantize(quantum, rounding=ROUND_HALF_UP)


def value_points(points: float, unit_price: float) -> Decimal:
    """Currency value of ``points`` at ``unit_price`` per point, to the cent."""
    if points < 0:
        raise DomainError(f"points must be >= 0, got {points}")
    if not unit_price > 0:
        raise DomainError(f"unit price must be > 0, got {unit_price}")
    return round_half_up(points * unit_price)


@dataclass(frozen=True)
class CountLine:
    id: str
    description: str
    ctx: CountContext
    est: EstimateTriple
    amount: int = 1
    price_class: str = "new_implementation"
    deflation: float = 1.0
    min_spread: bool = False
    volume: int | None = None
    reference_points: float | None = None

    def __post_init__(self) -> None:
        if isinstance(self.amount, bool) or not isinstance(self.amount, int) or self.amount < 1:
            raise ValidationError(f"line {self.id}: amount must be an integer >= 1, got {self.amount!r}")
        if not (math.isfinite(self.deflation) and self.deflation >= 1):
            raise ValidationError(f"line {self.id}: deflation must be >= 1, got {self.deflation}")
        if self.volume is not None:
            quantity_bucket(self.volume)

    @property
    def effective_amount(self) -> int:
        return quantity_bucket(self.volume) if self.volume is not None else self.amount


@dataclass(frozen=True)
class ValuedLine:
    line: CountLine
    estimate: EstimateTriple  # after the min-spread rule, when flagged
    points_per_unit: float
    amount: int
    unit_price: float
    total_points: float
    total_value: float
    deflated_value: float


def value_line(line: CountLine, prices, min_spread_ratio: float = DEFAULT_MIN_SPREAD) -> ValuedLine:
    unit_price = prices.unit_price(line.price_class)
    est = enforce_min_spread(line.est, min_spread_ratio) if line.min_spread else line.est
    per_unit = count_points(line.ctx, est).N
    amount = line.effective_amount
    total_value = per_unit * amount * unit_price
    return ValuedLine(
        line=line,
        estimate=est,
        points_per_unit=per_unit,
        amount=amount,
        unit_price=unit_price,
        total_points=per_unit * amount,
        total_value=total_value,
        deflated_value=total_value / line.deflation,
    )


@dataclass(frozen=True)
class Totals:
    points: float
    value: float
    deflated: float


def total_report(lines: Sequence[ValuedLine]) -> Totals:
    """Column sums at full precision (``math.fsum``, so order does not matter)."""
    if not lines:
        raise DomainError("no counting lines to total")
    return Totals(
        points=math.fsum(v.total_points for v in lines),
        value=math.fsum(v.total_value for v in lines),
        deflated=math.fsum(v.deflated_value for v in lines),
    )


@dataclass(frozen=True)
class Reconciliation:
    """Comparison of recomputed line points against externally printed ones."""

    printed_total: float
    recomputed_total: float
    mismatches: tuple[tuple[str, float, float], ...]  # (line id, printed, recomputed)

    @property
    def delta(self) -> float:
        return self.printed_total - self.recomputed_total

    def notes(self, unit_price: float | None = None) -> list[str]:
        if not self.mismatches and abs(self.delta) < 0.005:
            return []
        out = [f"reference total {self.printed_total:.2f} differs from recomputed {self.recomputed_total:.2f} by {self.delta:+.2f}"]
        for line_id, printed, recomputed in self.mismatches:
            out.append(f"line {line_id}: reference {printed:g} where the formula gives {recomputed:.4f} ({recomputed:.2f})")
        if unit_price is not None:
            out.append(
                f"valued at {unit_price:.2f}: reference {value_points(self.printed_total, unit_price):,.2f}, "
                f"recomputed {value_points(self.recomputed_total, unit_price):,.2f}"
            )
        return out


def reconcile(valued: Iterable[ValuedLine], tolerance: float = 0.005) -> Reconciliation | None:
    """Check lines carrying a reference value (``ref=`` flag) against the formula.

    A line is a mismatch when its printed value is further than ``tolerance``
    (half a unit in the second decimal) from the recomputed points per unit.
    """
    refs = [v for v in valued if v.line.reference_points is not None]
    if not refs:
        return None
    mismatches = tuple(
        (v.line.id, v.line.reference_points, v.points_per_unit)
        for v in refs
        if abs(v.line.reference_points - v.points_per_unit) > tolerance
    )
    return Reconciliation(
        printed_total=math.fsum(v.line.reference_points * v.amount for v in refs),
        recomputed_total=math.fsum(v.total_points for v in refs),
        mismatches=mismatches,
    )


SHEET_HEADER = ("id", "description", "C", "i", "K", "O", "MP", "P", "amount", "price_class", "deflation", "flags")


def _number(text: str, column: str) -> float:
    try:
        return float(text.strip().replace(",", "."))
    except ValueError:
        raise ParseError(f"{column}: not a number: {text!r}", field=column) from None


def _parse_flags(text: str) -> dict[str, str | None]:
    flags: dict[str, str | None] = {}
    for item in text.split("|"):
        item = item.strip()
        if not item:
            continue
        key, sep, value = item.partition("=")
        flags[key.strip().casefold()] = value.strip() if sep else None
    return flags


_KNOWN_FLAGS = {"min_spread", "volume", "task", "ref"}


def load_sheet(
    source: str,
    factors: FactorTables | None = None,
    catalog: Sequence[TaskCatalogEntry] | None = None,
) -> list[CountLine]:
    """Parse a counting sheet, resolving names against ``factors`` and ``catalog``.

    ``C`` may be a number or a step/language name, ``i`` a number or a tool
    name, and ``K`` defaults to 1 when blank. Durations accept ``H:MM:SS`` or
    decimal hours; with a ``task=<name>:<complexity>`` flag the three duration
    cells may be left blank and are taken from the catalog. Flags are
    ``|``-separated: ``min_spread``, ``volume=<items>``, ``task=...`` and
    ``ref=<printed points>``.

    A sheet whose header uses ``;`` as the delimiter is read with decimal
    commas. Every problem is collected and raised in one :class:`ValidationError`.
    """
    text = source.lstrip("﻿")
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ValidationError([Problem(None, "no counting lines")])
    delimiter = ";" if ";" in lines[0] and "," not in lines[0] else ","
    reader = csv.reader(io.StringIO(text.lstrip()), delimiter=delimiter, skipinitialspace=True)

    rows = [(n, r) for n, r in enumerate(reader, start=1) if r and any(c.strip() for c in r) and not r[0].lstrip().startswith("#")]
    header_row, header = rows[0]
    if tuple(c.strip() for c in header) != SHEET_HEADER:
        raise ValidationError([Problem(header_row, f"sheet header must be {','.join(SHEET_HEADER)}", kind="parse")])
    if len(rows) == 1:
        raise ValidationError([Problem(None, "no counting lines")])

    out: list[CountLine] = []
    problems: list[Problem] = []
    seen_ids: dict[str, int] = {}
    for row_no, row in rows[1:]:
        if len(row) != len(SHEET_HEADER):
            problems.append(Problem(row_no, f"expected {len(SHEET_HEADER)} columns, got {len(row)}", kind="parse"))
            continue
        cells = dict(zip(SHEET_HEADER, (c.strip() for c in row)))
        try:
            line = _line_from_cells(cells, factors, catalog)
        except ParseError as exc:
            problems.append(Problem(row_no, str(exc), kind="parse"))
            continue
        except (ValidationError, UnknownEntryError, DomainError) as exc:
            problems.append(Problem(row_no, str(exc)))
            continue
        if factors is not None and line.price_class not in factors.prices:
            problems.append(Problem(row_no, f"unknown price class {line.price_class!r}"))
        if line.id in seen_ids:
            problems.append(Problem(row_no, f"duplicate line id {line.id!r} (first at row {seen_ids[line.id]})"))
        seen_ids.setdefault(line.id, row_no)
        out.append(line)
    if problems:
        raise ValidationError(problems)
    return out


def _line_from_cells(cells: dict[str, str], factors: FactorTables | None, catalog) -> CountLine:
    flags = _parse_flags(cells["flags"])
    unknown = set(flags) - _KNOWN_FLAGS
    if unknown:
        raise ParseError(f"unknown flag(s): {', '.join(sorted(unknown))}", field="flags")

    def resolve(column: str, lookup) -> float:
        raw = cells[column]
        try:
            return _number(raw, column)
        except ParseError:
            if factors is None or not raw:
                raise
        return lookup(raw)

    c = resolve("C", lambda name: factors.effort.lookup(name))
    i = resolve("i", lambda name: factors.inertia[name])
    k = _number(cells["K"], "K") if cells["K"] else 1.0

    durations = [cells["O"], cells["MP"], cells["P"]]
    from_catalog = None
    if "task" in flags:
        spec = flags["task"] or ""
        name, sep, level = spec.rpartition(":")
        if not sep or not name:
            raise ParseError(f"task flag must read task=<name>:<complexity>, got {spec!r}", field="flags")
        if catalog is None:
            raise UnknownEntryError("task flag given but no catalog loaded")
        entry = find_task(list(catalog), name, ComplexityLevel.parse(level))
        if not any(durations):
            from_catalog = EstimateTriple.from_entry(entry)
    if from_catalog is not None:
        est = from_catalog
    elif all(durations):
        est = EstimateTriple(*(parse_duration(d) for d in durations))
    else:
        raise ParseError("O, MP and P are required unless a task flag supplies them", field="O/MP/P")

    amount_text = cells["amount"] or "1"
    try:
        amount = int(amount_text)
    except ValueError:
        raise ParseError(f"amount: not an integer: {amount_text!r}", field="amount") from None
    volume = None
    if "volume" in flags:
        try:
            volume = int(flags["volume"] or "")
        except ValueError:
            raise ParseError(f"volume flag must be an integer, got {flags['volume']!r}", field="flags") from None
    ref = _number(flags["ref"] or "", "ref") if "ref" in flags else None

    return CountLine(
        id=cells["id"],
        description=cells["description"],
        ctx=CountContext(c, i, k),
        est=est,
        amount=amount,
        price_class=cells["price_class"] or "new_implementation",
        deflation=_number(cells["deflation"], "deflation") if cells["deflation"] else 1.0,
        min_spread="min_spread" in flags,
        volume=volume,
        reference_points=ref,
    )

