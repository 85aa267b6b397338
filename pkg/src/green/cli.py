"""The ``greenc`` command: check, run and dump Green programs."""

from __future__ import annotations

import argparse
import io
import sys
from dataclasses import dataclass
from typing import Optional

from .checker import CheckedProgram, check_program
from .diagnostics import Diagnostic, GreenCompileError
from .lexer import LexError, case_warnings, tokenize
from .meta import Manifest, load_manifest
from .parser import parse_source
from .printer import print_program

REFLECT_LEVELS = ("classes", "calls")


@dataclass
class RunResult:
    stdout: str
    stderr: str
    status: int


def compile_sources(sources: list[tuple[str, str]], manifest: Optional[Manifest] = None,
                    ) -> tuple[Optional[CheckedProgram], list[Diagnostic]]:
    """Parse and check ``(text, file)`` pairs as one program.

    Returns the checked program (None on errors) and every diagnostic found.
    """
    diags: list[Diagnostic] = []
    progs = []
    for text, file in sources:
        try:
            progs.append((parse_source(text, file), file))
        except GreenCompileError as e:
            diags.extend(e.diagnostics)
            continue
        try:
            for span, msg in case_warnings(tokenize(text)):
                diags.append(Diagnostic("warning", span, "W006", msg, "lex", file))
        except LexError:
            pass
    if any(d.is_error for d in diags):
        return None, diags
    try:
        prog = check_program(progs, manifest)
    except GreenCompileError as e:
        return None, diags + e.diagnostics
    return prog, diags + prog.diagnostics


def run_sources(sources: list[tuple[str, str]], entry: str, args: Optional[list[str]] = None,
                stdin: str = "", manifest: Optional[Manifest] = None, assertions: bool = True,
                reflect: tuple = (), strict_for: bool = False) -> RunResult:
    """Compile and run in memory, capturing both output streams."""
    from .runtime import Interpreter
    out, err = io.StringIO(), io.StringIO()
    prog, diags = compile_sources(sources, manifest)
    if prog is None:
        for d in diags:
            if d.is_error:
                err.write(d.render() + "\n")
        return RunResult(out.getvalue(), err.getvalue(), 1)
    try:
        prog.find_entry(entry)
    except GreenCompileError as e:
        for d in e.diagnostics:
            err.write(d.render() + "\n")
        return RunResult(out.getvalue(), err.getvalue(), 1)
    rt = Interpreter(prog, out=out, err=err, inp=io.StringIO(stdin), assertions=assertions,
                     reflect=reflect, strict_for=strict_for)
    status = rt.run(entry, list(args or []))
    return RunResult(out.getvalue(), err.getvalue(), status)


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="greenc", description="Check and run Green programs.")
    ap.add_argument("command", choices=("check", "run", "dump-ast", "dump-types"))
    ap.add_argument("files", nargs="+", metavar="FILE")
    ap.add_argument("--entry", metavar="M", help="class object whose run method starts the program")
    ap.add_argument("--no-assert", action="store_true", help="do not evaluate assertions")
    ap.add_argument("--reflect", default="", metavar="LEVELS",
                    help="comma separated reflection levels: classes, calls")
    ap.add_argument("--manifest", metavar="FILE", help="allowed sets for shells and extensions")
    ap.add_argument("--strict-loop-var", action="store_true",
                    help="make reading a for variable after its loop a run-time fault")
    return ap


def _read(files: list[str]) -> list[tuple[str, str]]:
    out = []
    for f in files:
        with open(f, encoding="utf-8") as fh:
            out.append((fh.read(), f))
    return out


def main(argv: Optional[list[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    prog_args: list[str] = []
    if "--" in argv:
        i = argv.index("--")
        argv, prog_args = argv[:i], argv[i + 1:]
    ap = _parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    reflect = tuple(x for x in ns.reflect.split(",") if x)
    bad = [x for x in reflect if x not in REFLECT_LEVELS]
    if bad:
        ap.print_usage(sys.stderr)
        print(f"greenc: error: unknown reflection level {bad[0]}", file=sys.stderr)
        return 2
    if ns.command == "run" and not ns.entry:
        ap.print_usage(sys.stderr)
        print("greenc: error: run requires --entry", file=sys.stderr)
        return 2
    try:
        sources = _read(ns.files)
        manifest = load_manifest(ns.manifest) if ns.manifest else None
    except (OSError, ValueError) as e:
        print(f"greenc: error: {e}", file=sys.stderr)
        return 2

    if ns.command == "dump-ast":
        status = 0
        for text, file in sources:
            try:
                sys.stdout.write(print_program(parse_source(text, file)))
            except GreenCompileError as e:
                for d in e.diagnostics:
                    print(d.render(), file=sys.stderr)
                status = 1
        return status

    prog, diags = compile_sources(sources, manifest)
    show_warnings = ns.command == "check"
    for d in diags:
        if d.is_error or show_warnings:
            print(d.render(), file=sys.stderr)
    if prog is None:
        return 1
    if ns.command == "check":
        return 0
    if ns.command == "dump-types":
        sys.stdout.write(prog.checker.dump_types())
        return 0
    try:
        prog.find_entry(ns.entry)
    except GreenCompileError as e:
        for d in e.diagnostics:
            print(d.render(), file=sys.stderr)
        return 1
    from .runtime import Interpreter
    rt = Interpreter(prog, assertions=not ns.no_assert, reflect=reflect, strict_for=ns.strict_loop_var)
    return rt.run(ns.entry, prog_args)


if __name__ == "__main__":
    sys.exit(main())
