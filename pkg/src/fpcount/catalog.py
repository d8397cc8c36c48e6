"""Task catalog, factor tables and price schedules.

All durations are carried as decimal hours (plain ``float``). The ``H:MM:SS``
form is only a surface syntax handled by :func:`parse_duration` and
:func:`format_duration`.
"""
from __future__ import annotations

import configparser
import csv
import io
import math
import re
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from types import MappingProxyType
from typing import Mapping, NamedTuple

from .errors import DomainError, ParseError, Problem, UnknownEntryError, ValidationError

Hours = float

_HMS = re.compile(r"^(?P<h>-?\d+):(?P<m>-?\d+):(?P<s>-?\d+)$")
_DECIMAL = re.compile(r"^-?(\d+([.,]\d*)?|[.,]\d+)$")


def parse_duration(text: str) -> Hours:
    """Parse ``H:MM:SS`` or a decimal-hours literal into decimal hours.

    >>> parse_duration("1:40:00")
    1.6666666666666667
    >>> parse_duration("2.5")
    2.5
    """
    raw = text.strip()
    match = _HMS.match(raw)
    if match:
        parts = {name: int(match.group(name)) for name in ("h", "m", "s")}
        for name, label in (("h", "hours"), ("m", "minutes"), ("s", "seconds")):
            if parts[name] < 0:
                raise ParseError(f"negative {label} in duration {text!r}", field=label)
        for name, label in (("m", "minutes"), ("s", "seconds")):
            if parts[name] >= 60:
                raise ParseError(f"{label} must be < 60 in duration {text!r}", field=label)
        return (parts["h"] * 3600 + parts["m"] * 60 + parts["s"]) / 3600
    if _DECIMAL.match(raw):
        hours = float(raw.replace(",", "."))
        if hours < 0:
            raise ParseError(f"negative hours in duration {text!r}", field="hours")
        return hours
    raise ParseError(f"malformed duration {text!r}; expected H:MM:SS or decimal hours", field="duration")


def format_duration(hours: Hours) -> str:
    """Render decimal hours as ``H:MM:SS``, rounded to the nearest second."""
    if hours < 0 or not math.isfinite(hours):
        raise DomainError(f"cannot format duration {hours!r}")
    total = round(hours * 3600)
    h, rest = divmod(total, 3600)
    m, s = divmod(rest, 60)
    return f"{h}:{m:02d}:{s:02d}"


class ComplexityLevel(str, Enum):
    LOW = "low"
    AVERAGE = "average"
    HIGH = "high"
    # A level of its own, not an alias of AVERAGE.
    STANDARD = "standard"

    @classmethod
    def parse(cls, text: str) -> "ComplexityLevel":
        try:
            return cls(text.strip().casefold())
        except ValueError:
            choices = ", ".join(level.value for level in cls)
            raise ParseError(f"unknown complexity {text!r}; expected one of {choices}", field="complexity") from None


@dataclass(frozen=True)
class TaskCatalogEntry:
    task_name: str
    complexity: ComplexityLevel
    optimistic: Hours
    pessimistic: Hours
    most_likely: Hours

    def __post_init__(self) -> None:
        if not (0 <= self.optimistic <= self.most_likely <= self.pessimistic):
            raise ValidationError(
                f"{self.task_name} ({self.complexity.value}): durations violate "
                f"O <= MP <= P ({self.optimistic}, {self.most_likely}, {self.pessimistic})"
            )

    @property
    def key(self) -> tuple[str, ComplexityLevel]:
        return (_norm(self.task_name), self.complexity)


CATALOG_HEADER = ("task", "complexity", "optimistic", "pessimistic", "most_likely")


def load_task_catalog(source: str) -> list[TaskCatalogEntry]:
    """Load catalog rows from comma-separated text.

    Every problem in the file is collected before raising, so a single
    :class:`ValidationError` lists all offending rows.
    """
    reader = csv.reader(io.StringIO(source), skipinitialspace=True)
    rows = [(n, r) for n, r in enumerate(reader, start=1) if r and any(c.strip() for c in r)]
    rows = [(n, r) for n, r in rows if not r[0].lstrip().startswith("#")]
    if not rows:
        raise ValidationError([Problem(None, "missing catalog header", kind="parse")])
    _, header = rows[0]
    if tuple(c.strip().casefold() for c in header) != CATALOG_HEADER:
        raise ValidationError([Problem(1, f"catalog header must be {','.join(CATALOG_HEADER)}", kind="parse")])

    entries: list[TaskCatalogEntry] = []
    seen: dict[tuple[str, ComplexityLevel], int] = {}
    problems: list[Problem] = []
    for line_no, row in rows[1:]:
        if len(row) != len(CATALOG_HEADER):
            problems.append(Problem(line_no, f"expected {len(CATALOG_HEADER)} columns, got {len(row)}", kind="parse"))
            continue
        name = row[0].strip()
        try:
            complexity = ComplexityLevel.parse(row[1])
            o, p, mp = (parse_duration(cell) for cell in row[2:5])
        except ParseError as exc:
            problems.append(Problem(line_no, str(exc), kind="parse"))
            continue
        try:
            entry = TaskCatalogEntry(name, complexity, o, p, mp)
        except ValidationError as exc:
            problems.append(Problem(line_no, str(exc)))
            continue
        if entry.key in seen:
            problems.append(Problem(line_no, f"duplicate task/complexity {name!r}/{complexity.value} (first at row {seen[entry.key]})"))
            continue
        seen[entry.key] = line_no
        entries.append(entry)
    if problems:
        raise ValidationError(problems)
    return entries


def find_task(catalog: list[TaskCatalogEntry], task_name: str, complexity: ComplexityLevel | str) -> TaskCatalogEntry:
    if not isinstance(complexity, ComplexityLevel):
        complexity = ComplexityLevel.parse(complexity)
    key = (_norm(task_name), complexity)
    for entry in catalog:
        if entry.key == key:
            return entry
    raise UnknownEntryError(f"no catalog entry for task {task_name!r} with complexity {complexity.value}")


def _norm(name: str) -> str:
    return " ".join(name.replace("_", " ").split()).casefold()


class _AliasTable:
    """Name -> value mapping where a key like ``PHP/JS/ASP`` answers to each part."""

    def __init__(self, values: Mapping[str, float], kind: str) -> None:
        self.kind = kind
        self.values = MappingProxyType(dict(values))
        index: dict[str, str] = {}
        for key in values:
            for alias in {key, *key.split("/")}:
                norm = _norm(alias)
                if not norm:
                    continue
                if norm in index and index[norm] != key:
                    raise ValidationError(f"{kind} name {alias!r} is ambiguous between {index[norm]!r} and {key!r}")
                index[norm] = key
        self._index = index

    def resolve(self, name: str) -> str:
        try:
            return self._index[_norm(name)]
        except KeyError:
            raise UnknownEntryError(f"unknown {self.kind} {name!r}") from None

    def __contains__(self, name: object) -> bool:
        return isinstance(name, str) and _norm(name) in self._index

    def __getitem__(self, name: str) -> float:
        return self.values[self.resolve(name)]

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class EffortFactorTable:
    """Intellectual-effort conversion factors per project step and per language."""

    step_factors: Mapping[str, float]
    language_factors: Mapping[str, float]
    _steps: _AliasTable = field(init=False, repr=False, compare=False)
    _languages: _AliasTable = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        for table in (self.step_factors, self.language_factors):
            for name, value in table.items():
                if not value > 0:
                    raise ValidationError(f"effort factor {name!r} must be > 0, got {value}")
        if any(_norm(name) == "construction" for name in self.step_factors):
            raise ValidationError("construction has no step factor; it resolves through language factors")
        object.__setattr__(self, "_steps", _AliasTable(self.step_factors, "project step"))
        object.__setattr__(self, "_languages", _AliasTable(self.language_factors, "construction language"))

    def step(self, name: str) -> float:
        if _norm(name) == "construction":
            raise UnknownEntryError("the construction step resolves through a language factor; name the language instead")
        return self._steps[name]

    def language(self, name: str) -> float:
        return self._languages[name]

    def lookup(self, name: str) -> float:
        """Resolve a step name first, then a construction language."""
        if name in self._steps:
            return self.step(name)
        if name in self._languages:
            return self.language(name)
        raise UnknownEntryError(f"unknown effort factor {name!r} (neither a project step nor a language)")


@dataclass(frozen=True)
class InertiaTable:
    tool_inertia: Mapping[str, float]
    _tools: _AliasTable = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        for name, value in self.tool_inertia.items():
            if not 0 <= value <= 1:
                raise ValidationError(f"inertia of {name!r} must lie in [0, 1], got {value}")
        object.__setattr__(self, "_tools", _AliasTable(self.tool_inertia, "tool"))

    def __getitem__(self, name: str) -> float:
        return self._tools[name]

    def __contains__(self, name: object) -> bool:
        return name in self._tools


@dataclass(frozen=True)
class PriceSchedule:
    price_classes: Mapping[str, float]
    currency_label: str = "R$"
    _classes: _AliasTable = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        for name, value in self.price_classes.items():
            if not value > 0:
                raise ValidationError(f"unit point value of {name!r} must be > 0, got {value}")
        object.__setattr__(self, "_classes", _AliasTable(self.price_classes, "price class"))

    def unit_price(self, name: str) -> float:
        return self._classes[name]

    def __contains__(self, name: object) -> bool:
        return name in self._classes


class FactorTables(NamedTuple):
    effort: EffortFactorTable
    inertia: InertiaTable
    prices: PriceSchedule


def load_factor_tables(source: str) -> FactorTables:
    """Read effort factors, tool inertia and prices from INI-style text.

    Sections: ``[steps]``, ``[languages]``, ``[inertia]``, optional
    ``[productivity_gain]`` (stored as inertia ``1 - gain``) and ``[prices]``
    whose optional ``currency`` key sets the label.
    """
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str  # keep tool names as written
    try:
        parser.read_string(source)
    except configparser.Error as exc:
        raise ValidationError([Problem(None, f"malformed factor config: {exc}", kind="parse")]) from None

    problems: list[Problem] = []

    def section(name: str, required: bool = True) -> dict[str, float]:
        if not parser.has_section(name):
            if required:
                problems.append(Problem(None, f"missing section [{name}]", kind="parse"))
            return {}
        values = {}
        for key, raw in parser.items(name):
            if name == "prices" and key.casefold() == "currency":
                continue
            try:
                values[key] = float(raw.strip().replace(",", "."))
            except ValueError:
                problems.append(Problem(None, f"[{name}] {key}: not a number: {raw!r}", kind="parse"))
        return values

    steps = section("steps")
    languages = section("languages")
    inertia = section("inertia")
    for tool, gain in section("productivity_gain", required=False).items():
        if not 0 <= gain <= 1:
            problems.append(Problem(None, f"[productivity_gain] {tool}: gain must lie in [0, 1], got {gain}"))
            continue
        inertia[tool] = 1.0 - gain
    prices = section("prices")
    currency = parser.get("prices", "currency", fallback="R$").strip() if parser.has_section("prices") else "R$"

    built = {}
    for label, build in (
        ("effort", lambda: EffortFactorTable(steps, languages)),
        ("inertia", lambda: InertiaTable(inertia)),
        ("prices", lambda: PriceSchedule(prices, currency)),
    ):
        try:
            built[label] = build()
        except ValidationError as exc:
            problems.extend(exc.problems)
    if problems:
        raise ValidationError(problems)
    return FactorTables(built["effort"], built["inertia"], built["prices"])


def bundled_text(name: str) -> str:
    return resources.files("fpcount").joinpath("data", name).read_text(encoding="utf-8")


def default_catalog() -> list[TaskCatalogEntry]:
    return load_task_catalog(bundled_text("tasks.csv"))


def default_factors() -> FactorTables:
    return load_factor_tables(bundled_text("factors.ini"))


def productivity(inertia: float) -> float:
    """Tool productivity, the reciprocal of its inertia."""
    if inertia == 0:
        raise DomainError("humanware has no finite tool productivity (i = 0)")
    if not 0 < inertia <= 1:
        raise DomainError(f"inertia must lie in (0, 1], got {inertia}")
    return 1.0 / inertia
