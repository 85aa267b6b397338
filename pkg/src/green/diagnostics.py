"""Source spans and diagnostics shared by every compiler phase."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple


class Span(NamedTuple):
    offset: int
    length: int
    line: int
    col: int


NO_SPAN = Span(0, 0, 0, 0)


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" or "warning"
    span: Span
    code: str
    message: str
    category: str = "type"  # lex, parse, type, runtime
    file: str = "<input>"

    def render(self) -> str:
        return (f"{self.file}:{self.span.line}:{self.span.col}: "
                f"{self.severity}[{self.code}]: {self.message}")

    @property
    def is_error(self) -> bool:
        return self.severity == "error"


class GreenCompileError(Exception):
    """Raised when a phase cannot continue; carries the diagnostics."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("\n".join(d.render() for d in diagnostics))
