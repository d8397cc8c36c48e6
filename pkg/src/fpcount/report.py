"""Rendering of count reports as a text table, CSV or JSON."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Sequence

from .valuation import POINT_PLACES, Totals, ValuedLine, round_half_up

FORMATS = ("table", "csv", "json")


@dataclass
class CountReport:
    lines: Sequence[ValuedLine]
    totals: Totals
    currency: str = "R$"
    notes: list[str] = field(default_factory=list)
    stamp: str | None = None


def _pts(x: float) -> str:
    return str(round_half_up(x, POINT_PLACES))


def _cur(x: float, grouped: bool = False) -> str:
    value = round_half_up(x)
    return f"{value:,.2f}" if grouped else f"{value:.2f}"


def _num(x: float) -> str:
    return f"{x:g}"


def _line_notes(v: ValuedLine) -> str:
    notes = []
    if v.estimate.corrected:
        notes.append("min-spread corrected")
    if v.line.volume is not None:
        notes.append(f"volume {v.line.volume} -> quantity {v.amount}")
    return "; ".join(notes)


def render(report: CountReport, fmt: str = "table") -> str:
    if fmt == "table":
        return render_table(report)
    if fmt == "csv":
        return render_csv(report)
    if fmt == "json":
        return render_json(report)
    raise ValueError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")


TABLE_COLUMNS = (
    "Counting", "C", "O(h)", "MP(h)", "P(h)", "i", "Points/unity", "Point value",
    "Amount", "Defl", "Tot value", "Defl value", "Tot points",
)


def render_table(report: CountReport) -> str:
    rows = []
    for v in report.lines:
        o, mp, p = v.estimate
        rows.append((
            f"{v.line.id}- {v.line.description}", _num(v.line.ctx.C), _num(o), _num(mp), _num(p),
            _num(v.line.ctx.i), _pts(v.points_per_unit), _cur(v.unit_price, True), str(v.amount),
            _num(v.line.deflation), _cur(v.total_value, True), _cur(v.deflated_value, True),
            _cur(v.total_points, True),
        ))
    t = report.totals
    rows.append(("TOTAL", *[""] * 9, _cur(t.value, True), _cur(t.deflated, True), _cur(t.points, True)))

    widths = [max(len(r[c]) for r in (TABLE_COLUMNS, *rows)) for c in range(len(TABLE_COLUMNS))]

    def fmt_row(cells):
        first = cells[0].ljust(widths[0])
        return "  ".join([first, *(cell.rjust(w) for cell, w in zip(cells[1:], widths[1:]))]).rstrip()

    rule = "-" * len(fmt_row(TABLE_COLUMNS))
    out = []
    if report.stamp:
        out.append(f"generated {report.stamp}")
    out += [f"Currency: {report.currency}", fmt_row(TABLE_COLUMNS), rule]
    out += [fmt_row(r) for r in rows[:-1]]
    out += [rule, fmt_row(rows[-1])]
    line_notes = [(v.line.id, _line_notes(v)) for v in report.lines]
    extra = [f"{line_id}: {note}" for line_id, note in line_notes if note] + report.notes
    if extra:
        out.append("")
        out += [f"note: {n}" for n in extra]
    return "\n".join(out) + "\n"


CSV_COLUMNS = (
    "id", "description", "C", "i", "K", "O", "MP", "P", "points_per_unit", "point_value",
    "amount", "deflation", "total_value", "deflated_value", "total_points", "notes",
)


def render_csv(report: CountReport) -> str:
    buf = io.StringIO()
    if report.stamp:
        buf.write(f"# generated {report.stamp}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for v in report.lines:
        o, mp, p = v.estimate
        ctx = v.line.ctx
        writer.writerow((
            v.line.id, v.line.description, _num(ctx.C), _num(ctx.i), _num(ctx.K), _num(o), _num(mp), _num(p),
            _pts(v.points_per_unit), _cur(v.unit_price), v.amount, _num(v.line.deflation),
            _cur(v.total_value), _cur(v.deflated_value), _cur(v.total_points), _line_notes(v),
        ))
    t = report.totals
    writer.writerow((
        "TOTAL", "", "", "", "", "", "", "", "", "", "", "",
        _cur(t.value), _cur(t.deflated), _cur(t.points), "; ".join(report.notes),
    ))
    return buf.getvalue()


def render_json(report: CountReport) -> str:
    """Full-precision floats plus display strings, so totals can be re-derived."""
    lines = []
    for v in report.lines:
        o, mp, p = v.estimate
        ctx = v.line.ctx
        lines.append({
            "id": v.line.id,
            "description": v.line.description,
            "C": ctx.C,
            "i": ctx.i,
            "K": ctx.K,
            "O": o,
            "MP": mp,
            "P": p,
            "corrected": v.estimate.corrected,
            "points_per_unit": v.points_per_unit,
            "point_value": v.unit_price,
            "amount": v.amount,
            "deflation": v.line.deflation,
            "total_value": v.total_value,
            "deflated_value": v.deflated_value,
            "total_points": v.total_points,
            "display": {
                "points_per_unit": _pts(v.points_per_unit),
                "total_value": _cur(v.total_value),
                "deflated_value": _cur(v.deflated_value),
                "total_points": _cur(v.total_points),
            },
        })
    t = report.totals
    doc = {
        "currency": report.currency,
        "lines": lines,
        "total": {
            "points": t.points,
            "value": t.value,
            "deflated": t.deflated,
            "display": {"points": _cur(t.points), "value": _cur(t.value), "deflated": _cur(t.deflated)},
        },
        "notes": list(report.notes),
    }
    if report.stamp:
        doc["generated"] = report.stamp
    return json.dumps(doc, indent=2) + "\n"
