"""Exception hierarchy shared by the loaders, the engine and the CLI."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable


class FunctionPointError(Exception):
    """Base class for every error raised by :mod:`fpcount`."""


class ParseError(FunctionPointError, ValueError):
    """Malformed textual input. ``field`` names the offending component."""

    def __init__(self, message: str, field: str | None = None) -> None:
        super().__init__(message)
        self.field = field


class DomainError(FunctionPointError, ValueError):
    """A value lies outside the domain of a formula."""


class UnknownEntryError(FunctionPointError, LookupError):
    """A name could not be resolved against a factor table or price schedule."""


@dataclass(frozen=True)
class Problem:
    row: int | None
    message: str
    kind: str = "validation"  # or "parse"

    def __str__(self) -> str:
        where = f"row {self.row}: " if self.row is not None else ""
        return f"{where}{self.message}"


class ValidationError(FunctionPointError, ValueError):
    """One or more invariant violations, each tied to a source row when known."""

    def __init__(self, problems: Iterable[Problem] | str) -> None:
        if isinstance(problems, str):
            problems = [Problem(None, problems)]
        self.problems = list(problems)
        super().__init__("; ".join(str(p) for p in self.problems))

    @property
    def has_parse_errors(self) -> bool:
        return any(p.kind == "parse" for p in self.problems)
