"""Shared diagnostic records and the common error base class."""

from __future__ import annotations

from dataclasses import dataclass

SEVERITY_ERROR = "error"
SEVERITY_WARNING = "warning"


class ContractCheckError(Exception):
    """Base class for every error raised by this package."""


@dataclass(frozen=True)
class Diagnostic:
    """One validation finding with a stable code.

    ``subject`` names the offending element (place, transition, label);
    ``line``/``column`` are set when the finding points into a source file.
    """

    code: str
    severity: str
    message: str
    subject: str | None = None
    line: int | None = None
    column: int | None = None

    @property
    def is_error(self) -> bool:
        return self.severity == SEVERITY_ERROR

    def __str__(self) -> str:
        where = f" (line {self.line})" if self.line is not None else ""
        who = f" [{self.subject}]" if self.subject else ""
        return f"{self.severity} {self.code}{who}: {self.message}{where}"


def errors_of(diagnostics) -> list[Diagnostic]:
    return [d for d in diagnostics if d.is_error]
