"""Loading and running the golden corpus under ``corpus/``."""

from __future__ import annotations

import shlex
from dataclasses import dataclass, field
from pathlib import Path

from green.cli import RunResult, run_sources
from green.meta import load_manifest

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


@dataclass
class Case:
    name: str
    path: Path
    entry: str = "Main"
    args: list[str] = field(default_factory=list)
    assertions: bool = True
    reflect: tuple = ()
    manifest: Path | None = None
    strict_for: bool = False
    stdin: str = ""

    def source(self) -> str:
        return (self.path / "prog.green").read_text(encoding="utf-8")

    def run(self, source: str | None = None) -> RunResult:
        man = load_manifest(str(self.manifest)) if self.manifest else None
        text = self.source() if source is None else source
        return run_sources([(text, f"{self.name}.green")], self.entry, self.args, stdin=self.stdin,
                           manifest=man, assertions=self.assertions, reflect=self.reflect,
                           strict_for=self.strict_for)

    def expected(self) -> RunResult:
        p = self.path
        return RunResult((p / "expected.stdout").read_text(encoding="utf-8"),
                         (p / "expected.stderr").read_text(encoding="utf-8"),
                         int((p / "expected.exit").read_text().strip()))


def load_case(path: Path) -> Case:
    case = Case(path.name, path)
    flags = shlex.split((path / "cmd").read_text()) if (path / "cmd").exists() else []
    it = iter(flags)
    for f in it:
        if f == "--entry":
            case.entry = next(it)
        elif f == "--no-assert":
            case.assertions = False
        elif f.startswith("--reflect="):
            case.reflect = tuple(x for x in f.split("=", 1)[1].split(",") if x)
        elif f == "--manifest":
            case.manifest = path / next(it)
        elif f == "--strict-loop-var":
            case.strict_for = True
        else:
            raise ValueError(f"{path}: unknown flag {f}")
    if (path / "args").exists():
        case.args = shlex.split((path / "args").read_text())
    if (path / "stdin").exists():
        case.stdin = (path / "stdin").read_text()
    return case


def all_cases() -> list[Case]:
    return [load_case(p) for p in sorted(CORPUS.iterdir()) if (p / "prog.green").exists()]
