"""Command line: ``fpcount {count,gauge,curves,validate}``.

Exit status is 0 on success, 1 on validation failures and 2 on I/O or parse
failures.
"""
from __future__ import annotations

import argparse
import csv
import datetime as dt
import io
import json
import sys
from pathlib import Path
from typing import Sequence

from .catalog import FactorTables, bundled_text, load_factor_tables, load_task_catalog
from .counting import CountContext, Direction, gauge_points, marginal_points
from .dynamics import (
    DEFAULT_INERTIA_GRID,
    DEFAULT_K_VALUES,
    DEFAULT_MP_GRID,
    CurveSpec,
    SweepVariable,
    figure_spec,
    sweep,
    sweep_csv,
)
from .errors import DomainError, FunctionPointError, ValidationError
from .estimation import DEFAULT_MIN_SPREAD, EstimateTriple
from .report import FORMATS, CountReport, render
from .valuation import POINT_PLACES, load_sheet, reconcile, round_half_up, total_report, value_line

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2


class CliFailure(Exception):
    def __init__(self, status: int, messages: Sequence[str]) -> None:
        super().__init__("\n".join(messages))
        self.status = status
        self.messages = list(messages)


def _read(path: str | None, bundled: str | None) -> str:
    if path is None:
        if bundled is None:
            raise CliFailure(EXIT_IO, ["--sheet is required"])
        return bundled_text(bundled)
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliFailure(EXIT_IO, [f"cannot read {path}: {exc.strerror or exc}"]) from None


def _fail_from(exc: ValidationError, what: str) -> CliFailure:
    status = EXIT_IO if exc.has_parse_errors else EXIT_INVALID
    return CliFailure(status, [f"{what}: {p}" for p in exc.problems])


def _load_factors(args) -> FactorTables:
    try:
        return load_factor_tables(_read(args.factors, "factors.ini"))
    except ValidationError as exc:
        raise _fail_from(exc, "factors") from None


def _load_catalog(args):
    try:
        return load_task_catalog(_read(args.catalog, "tasks.csv"))
    except ValidationError as exc:
        raise _fail_from(exc, "catalog") from None


def _valued_lines(args):
    factors = _load_factors(args)
    catalog = _load_catalog(args)
    try:
        lines = load_sheet(_read(args.sheet, None), factors, catalog)
    except ValidationError as exc:
        raise _fail_from(exc, "sheet") from None
    valued = [value_line(line, factors.prices, args.min_spread_ratio) for line in lines]
    return factors, valued


def _stamp(args) -> str | None:
    return dt.datetime.now(dt.timezone.utc).replace(microsecond=0).isoformat() if args.stamp else None


def cmd_count(args) -> str:
    factors, valued = _valued_lines(args)
    notes = []
    rec = reconcile(valued)
    if rec is not None:
        prices = {v.unit_price for v in valued}
        notes = rec.notes(prices.pop() if len(prices) == 1 else None)
    report = CountReport(valued, total_report(valued), factors.prices.currency_label, notes, _stamp(args))
    return render(report, args.format)


def cmd_gauge(args) -> str:
    _, valued = _valued_lines(args)
    matches = [v for v in valued if v.line.id == args.line]
    if not matches:
        raise CliFailure(EXIT_INVALID, [f"unknown line id {args.line!r}"])
    v = matches[0]
    try:
        gauged = gauge_points(v.line.ctx, v.estimate, args.hours, args.direction)
    except DomainError as exc:
        raise CliFailure(EXIT_INVALID, [f"line {v.line.id}: {exc}"]) from None
    rate = marginal_points(v.line.ctx, v.estimate)
    value = gauged * v.amount * v.unit_price
    doc = {
        "id": v.line.id,
        "description": v.line.description,
        "hours": args.hours,
        "direction": Direction(args.direction).value,
        "points": v.points_per_unit,
        "points_per_hour": rate,
        "gauged_points": gauged,
        "amount": v.amount,
        "point_value": v.unit_price,
        "gauged_value": value,
        "gauged_deflated_value": value / v.line.deflation,
    }
    stamp = _stamp(args)
    if args.format == "json":
        if stamp:
            doc["generated"] = stamp
        return json.dumps(doc, indent=2) + "\n"
    display = {
        "points": str(round_half_up(doc["points"], POINT_PLACES)),
        "points_per_hour": str(round_half_up(rate, POINT_PLACES)),
        "gauged_points": str(round_half_up(gauged, POINT_PLACES)),
        "gauged_value": str(round_half_up(value)),
        "gauged_deflated_value": str(round_half_up(doc["gauged_deflated_value"])),
    }
    keys = ("id", "description", "hours", "direction", "points", "points_per_hour", "gauged_points",
            "amount", "point_value", "gauged_value", "gauged_deflated_value")
    shown = {k: display.get(k, doc[k]) for k in keys}
    shown["point_value"] = f"{v.unit_price:.2f}"
    if args.format == "csv":
        buf = io.StringIO()
        if stamp:
            buf.write(f"# generated {stamp}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerows([keys, [shown[k] for k in keys]])
        return buf.getvalue()
    width = max(len(k) for k in keys)
    head = [f"generated {stamp}"] if stamp else []
    return "\n".join(head + [f"{k.ljust(width)}  {shown[k]}" for k in keys]) + "\n"


def _grid(text: str | None, default):
    """``a,b,c`` or ``start:stop:step`` (inclusive of stop)."""
    if text is None:
        return tuple(default)
    try:
        if ":" in text:
            start, stop, step = (float(x) for x in text.split(":"))
            if step <= 0:
                raise ValueError
            n = int(round((stop - start) / step))
            return tuple(round(start + k * step, 10) for k in range(n + 1))
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise CliFailure(EXIT_IO, [f"malformed grid {text!r}"]) from None


def cmd_curves(args) -> str:
    k_values = _grid(args.K, DEFAULT_K_VALUES)
    try:
        if args.sweep is None:
            spec = figure_spec(args.figure, k_values)
            if any(x is not None for x in (args.i_grid, args.mp_grid, args.C, args.O, args.MP, args.P, args.i)):
                spec = _custom_spec(args, spec.sweep_variable, spec, k_values)
        else:
            spec = _custom_spec(args, SweepVariable(args.sweep), figure_spec(1 if args.sweep == "inertia" else 3), k_values)
        return sweep_csv(sweep(spec))
    except (ValidationError, DomainError) as exc:
        raise CliFailure(EXIT_INVALID, [f"curves: {exc}"]) from None


def _custom_spec(args, variable: SweepVariable, base: CurveSpec, k_values) -> CurveSpec:
    o, mp, p = base.estimate
    est = EstimateTriple(
        args.O if args.O is not None else o,
        args.MP if args.MP is not None else mp,
        args.P if args.P is not None else p,
    )
    ctx = CountContext(
        args.C if args.C is not None else base.context.C,
        args.i if args.i is not None else base.context.i,
        1.0,
    )
    return CurveSpec(
        variable, ctx, est,
        inertia_grid=_grid(args.i_grid, DEFAULT_INERTIA_GRID),
        mp_grid=_grid(args.mp_grid, DEFAULT_MP_GRID),
        K_values=k_values,
    )


def cmd_validate(args) -> tuple[int, str]:
    """Check catalog, factor tables and (optionally) a sheet; never raises."""
    problems: list[str] = []
    status = EXIT_OK
    checks = (
        ("catalog", args.catalog, "tasks.csv", load_task_catalog),
        ("factors", args.factors, "factors.ini", load_factor_tables),
    )
    loaded = {}
    for what, path, bundled, loader in checks:
        try:
            loaded[what] = loader(_read(path, bundled))
        except CliFailure as exc:
            problems += [f"{what}: {m}" for m in exc.messages]
            status = EXIT_IO
        except ValidationError as exc:
            problems += [f"{what}: {p}" for p in exc.problems]
            status = max(status, EXIT_INVALID)
    catalog, factors = loaded.get("catalog"), loaded.get("factors")
    summary = []
    if catalog is not None:
        summary.append(f"catalog: {len(catalog)} entries, ordering O <= MP <= P holds")
    if factors is not None:
        summary.append(
            f"factors: {len(factors.effort.step_factors)} steps, {len(factors.effort.language_factors)} languages, "
            f"{len(factors.inertia.tool_inertia)} tools, {len(factors.prices.price_classes)} price classes"
        )
    if args.sheet is not None:
        try:
            lines = load_sheet(_read(args.sheet, None), factors, catalog)
        except CliFailure as exc:
            problems += [f"sheet: {m}" for m in exc.messages]
            status = EXIT_IO
        except ValidationError as exc:
            problems += [f"sheet: {p}" for p in exc.problems]
            status = max(status, EXIT_INVALID)
        else:
            if factors is None:
                problems.append("sheet: price classes not checked (factor tables failed to load)")
                status = max(status, EXIT_INVALID)
            summary.append(f"sheet: {len(lines)} lines, all references resolve")
    out = [f"ok {s}" for s in summary] + [f"error {p}" for p in problems]
    out.append("clean" if not problems else f"{len(problems)} problem(s)")
    return status, "\n".join(out) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--catalog", help="task catalog CSV (default: bundled task table)")
    common.add_argument("--factors", help="factor/price config (default: bundled tables)")
    common.add_argument("--sheet", help="counting sheet CSV")
    common.add_argument("--format", choices=FORMATS, default="table")
    common.add_argument("--out", help="write output to this file instead of standard output")
    common.add_argument("--min-spread-ratio", type=float, default=DEFAULT_MIN_SPREAD,
                        help="minimum (P - O) / O for lines flagged min_spread (default 0.20)")
    common.add_argument("--stamp", action="store_true", help="include a generation timestamp")

    parser = argparse.ArgumentParser(prog="fpcount", description="Function-point counts for non-measurable tasks.")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("count", parents=[common], help="value every line of a counting sheet")

    gauge = sub.add_parser("gauge", parents=[common], help="adjust one line by +/- H hours of most-likely time")
    gauge.add_argument("--line", required=True, help="line id in the sheet")
    gauge.add_argument("--hours", type=float, required=True)
    gauge.add_argument("--direction", choices=[d.value for d in Direction], default="add")

    curves = sub.add_parser("curves", parents=[common], help="emit N and V over an inertia/MP grid as CSV")
    curves.add_argument("--figure", type=int, choices=(1, 2, 3), default=1)
    curves.add_argument("--sweep", choices=[v.value for v in SweepVariable])
    curves.add_argument("--i-grid", help="inertia grid: a,b,c or start:stop:step")
    curves.add_argument("--mp-grid", help="most-likely grid in hours: a,b,c or start:stop:step")
    curves.add_argument("--K", help="K values: a,b,c (default 0.5,1,2)")
    curves.add_argument("--C", type=float)
    curves.add_argument("--i", type=float, help="fixed inertia when sweeping MP only")
    curves.add_argument("--O", type=float)
    curves.add_argument("--MP", type=float)
    curves.add_argument("--P", type=float)

    sub.add_parser("validate", parents=[common], help="check catalog, factor tables and sheet integrity")
    return parser


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            status, text = cmd_validate(args)
            _emit(text, args.out)
            return status
        handler = {"count": cmd_count, "gauge": cmd_gauge, "curves": cmd_curves}[args.command]
        text = handler(args)
        _emit(text, args.out)
        return EXIT_OK
    except CliFailure as exc:
        for message in exc.messages:
            print(f"error: {message}", file=sys.stderr)
        return exc.status
    except FunctionPointError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
