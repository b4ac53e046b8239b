"""Exception types shared across the package."""

from __future__ import annotations

from typing import Iterable


class FlipBetError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(FlipBetError, ValueError):
    """An argument lies outside the domain an operation is defined on."""


class ValidationError(FlipBetError, ValueError):
    """Structurally invalid game inputs (schedules, traces, configs).

    Carries the full list of problems so callers can report every
    offending entry, not just the first one found.
    """

    def __init__(self, problems: str | Iterable[str]):
        if isinstance(problems, str):
            problems = [problems]
        self.problems: tuple[str, ...] = tuple(problems)
        super().__init__("; ".join(self.problems))


class CsvFormatError(ValidationError):
    """A CSV input file could not be parsed.

    ``line`` is the 1-based line number of the offending row, when known.
    """

    def __init__(self, message: str, *, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        prefix = ""
        if path is not None:
            prefix = f"{path}:"
        if line is not None:
            prefix += f"{line}:"
        if prefix:
            prefix += " "
        super().__init__(prefix + message)
