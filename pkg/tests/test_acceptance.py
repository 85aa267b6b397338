"""Acceptance suite: one pass/fail line per criterion.

Run with ``pytest -v -s tests/test_acceptance.py`` or directly with
``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import io
import itertools
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from corpus_util import all_cases  # noqa: E402
from gen import (MUTATIONS, ProgramGen, loop_pair, meta_sequence, mutate,  # noqa: E402
                 random_table, unrolled_relation)
from green.cli import RunResult, compile_sources, run_sources  # noqa: E402
from green.meta import load_manifest  # noqa: E402
from green.runtime import Interpreter  # noqa: E402

STEP_BOUND = 10 ** 6


def report(n: int, ok: bool, detail: str) -> str:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    print(line, flush=True)
    return line


def _run(src: str, entry: str = "Main", **kw) -> RunResult:
    return run_sources([(src, "gen.green")], entry, **kw)


def _errors(src: str) -> list:
    _, diags = compile_sources([(src, "gen.green")])
    return [d for d in diags if d.is_error]


# ---------------------------------------------------------------- 1

def criterion_1():
    cases = all_cases()
    start = time.perf_counter()
    bad = [c.name for c in cases if c.run() != c.expected()]
    elapsed = time.perf_counter() - start
    ok = len(cases) >= 20 and not bad and elapsed < 5.0
    return ok, f"{len(cases)} programs, {len(bad)} mismatched {bad}, {elapsed:.2f}s (limit 5s)"


# ---------------------------------------------------------------- 2

def criterion_2(tables: int = 1000, oracle_pairs: int = 200, seed: int = 2):
    rng = random.Random(seed)
    problems: list[str] = []
    max_steps = 0
    candidates = []  # (table, names, s, t) for the oracle
    for k in range(tables):
        rt = random_table(rng)
        tt, names = rt.table, rt.names
        eq, sub = {}, {}
        for s in names:
            for t in names:
                for rel, fn, store in (("eq", tt.equal, eq), ("sub", tt.subtype, sub)):
                    tt._eq_cache.clear()
                    tt._sub_cache.clear()
                    tt.steps = 0
                    store[s, t] = fn(s, t)
                    max_steps = max(max_steps, tt.steps)
        for s in names:
            if not eq[s, s] or not sub[s, s]:
                problems.append(f"table {k}: not reflexive at {s}")
        for s, t in itertools.product(names, repeat=2):
            if eq[s, t] != eq[t, s]:
                problems.append(f"table {k}: equality not symmetric at {s},{t}")
            if rt.is_subclass(s, t) and not sub[s, t]:
                problems.append(f"table {k}: {s} subclass of {t} but not a subtype")
            if eq[s, t] and not (sub[s, t] and sub[t, s]):
                problems.append(f"table {k}: equal but not mutual subtypes at {s},{t}")
        for s, t, u in itertools.product(names, repeat=3):
            if eq[s, t] and eq[t, u] and not eq[s, u]:
                problems.append(f"table {k}: equality not transitive at {s},{t},{u}")
            if sub[s, t] and sub[t, u] and not sub[s, u]:
                problems.append(f"table {k}: subtyping not transitive at {s},{t},{u}")
        distinct = [(s, t) for s in names for t in names if s != t]
        if distinct:
            equal = [p for p in distinct if eq[p]]
            pick = rng.choice(equal) if equal and rng.random() < 0.5 else rng.choice(distinct)
            candidates.append((tt, names, pick[0], pick[1], eq[pick]))
    sample = rng.sample(candidates, min(oracle_pairs, len(candidates)))
    disagree = 0
    for tt, names, s, t, e in sample:
        rel = unrolled_relation(tt, names, len(names) + 1)
        if ((s, t) in rel) != e:
            disagree += 1
    n_equal = sum(1 for *_, e in sample if e)
    if max_steps >= STEP_BOUND:
        problems.append(f"a query took {max_steps} steps")
    ok = not problems and disagree == 0 and len(sample) == oracle_pairs
    detail = (f"{tables} tables, {len(problems)} law violations, max {max_steps} steps per query "
              f"(bound {STEP_BOUND}), oracle disagreed on {disagree}/{len(sample)} pairs "
              f"({n_equal} equal)")
    if problems:
        detail += f"; first: {problems[0]}"
    return ok, detail


# ---------------------------------------------------------------- 3

FRUIT = """
class FruitException subclassOf Exception
    proc init() begin end
  public:
    proc getFruit() : String begin return "fruit"; end
end

class BananaException subclassOf FruitException
    proc init() begin end
  public:
    proc getBanana() : String begin return "banana"; end
end

class CatchFruitException subclassOf CatchUncheckedException
    proc init() begin end
  public:
%s
end

object Main
  public:
    proc make() ( exception : CatchFruitException )
      begin
      exception.throw(BananaException.new());
      end
    proc run()
      var catch : CatchFruitException;
      begin
      catch = CatchFruitException.new();
      try(catch)
        make();
      end
      Out.writeln(catch.getClassException() == BananaException, " ",
                  catch.getClassException() == FruitException, " ",
                  catch.getException().getClassObject() == BananaException);
      end
end
"""
BANANA_H = '    proc throw( e : BananaException ) begin Out.writeln("Banana handler"); end'
FRUIT_H = '    proc throw( e : FruitException ) begin Out.writeln("Fruit handler"); end'


def criterion_3():
    a = _run(FRUIT % (BANANA_H + "\n" + FRUIT_H))
    b = _run(FRUIT % (FRUIT_H + "\n" + BANANA_H))
    want_a = "Banana handler\ntrue false true\n"
    want_b = "Fruit handler\nfalse true true\n"
    ok = a.stdout == want_a and b.stdout == want_b and a.status == b.status == 0
    return ok, (f"Banana first -> {a.stdout.splitlines()}, Fruit first -> {b.stdout.splitlines()}"
                f"; getException().getClassObject() is BananaException in both")


# ---------------------------------------------------------------- 4

SHAPES = """
class Figure
    proc init() begin end
  public:
    proc draw() begin end
    proc area() : integer begin return 0; end
end

class Square subclassOf Figure
    proc init() begin end
  public:
    proc side() : integer begin return 1; end
end

class Window
    proc init() begin end
  public:
    proc draw() begin end
    proc close() begin end
end

class Frame
    proc init() begin end
  public:
    proc draw() begin end
    proc area() : integer begin return 0; end
    proc close() begin end
end

object Show
  public:
    proc print( f : Figure ) begin end
    proc print( w : Window ) begin end
end

object Main
  public:
    proc run()
      var f : Figure;
          s : Square;
      begin
%s
      end
end
"""
WRAPPERS = """
object Main
  public:
    proc m( i : integer ) begin end
    proc m( i : Integer ) begin end
    proc run() begin end
end
"""


def criterion_4():
    results = {
        "Frame ambiguity": [d.code for d in _errors(SHAPES % "      Show.print(Frame.new());")],
        "Square needs a cast": [d.code for d in _errors(SHAPES % "      f = Square.new();\n      s = f;")],
        "integer/Integer collision": [d.code for d in _errors(WRAPPERS)],
    }
    want = {"Frame ambiguity": ["T024"], "Square needs a cast": ["T021"],
            "integer/Integer collision": ["T009"]}
    control = [d.code for d in _errors(SHAPES % "      f = Square.new();\n      Show.print(f);")]
    ok = results == want and control == []
    return ok, f"{results}; control program errors {control}"


# ---------------------------------------------------------------- 5

def criterion_5(n: int = 500, seed: int = 5):
    rng = random.Random(seed)
    faults, rejected_good, runs_failed = [], 0, 0
    accepted = {k: 0 for k in MUTATIONS}
    for i in range(n):
        prog = ProgramGen(rng).program()
        src = prog.render()
        if _errors(src):
            rejected_good += 1
            continue
        try:
            r = _run(src)
        except Exception as e:  # an internal interpreter fault
            faults.append(f"program {i}: {type(e).__name__}: {e}")
            continue
        if r.status != 0:
            runs_failed += 1
        kind = MUTATIONS[i % len(MUTATIONS)]
        if not _errors(mutate(prog, kind, rng).render()):
            accepted[kind] += 1
    ok = not faults and rejected_good == 0 and runs_failed == 0 and not any(accepted.values())
    detail = (f"{n} programs: {rejected_good} wrongly rejected, {len(faults)} internal faults, "
              f"{runs_failed} abnormal exits; {n} mutants ({n // len(MUTATIONS)} per class), "
              f"accepted by class {accepted}")
    if faults:
        detail += f"; first fault: {faults[0]}"
    return ok, detail


# ---------------------------------------------------------------- 6

def criterion_6(n: int = 200, seed: int = 6):
    rng = random.Random(seed)
    bad = {"repeat": 0, "loop": 0}
    for i in range(n):
        kind = "repeat" if i % 2 == 0 else "loop"
        a, b = loop_pair(rng, kind)
        ra, rb = _run(a), _run(b)
        if ra != rb or ra.status != 0:
            bad[kind] += 1
    ok = not any(bad.values())
    return ok, f"{n} program pairs ({n // 2} repeat/until, {n // 2} loop/break), differing {bad}"


# ---------------------------------------------------------------- 7

CASTS = """
object Main
  public:
    proc run()
      var i, code : integer;
          b : byte;
          ch : char;
          ok, fine : boolean;
      begin
      for i = 0 to 255 do
        begin
        b = byte.cast(i);
        ok = char.castOk(b);
        fine = false;
        try(CatchAll)
          ch = char.cast(b);
          fine = true;
        end
        Out.writeln("byte ", i, " ", ok, " ", fine);
        end
      for i = -1 to 256 do
        begin
        ok = byte.castOk(i);
        fine = false;
        try(CatchAll)
          b = byte.cast(i);
          fine = true;
        end
        Out.writeln("int ", i, " ", ok, " ", fine);
        end
      for code = 0 to 127 do
        begin
        ch = char.cast(code);
        ok = byte.castOk(ch) and integer.castOk(ch) and char.castOk(code);
        fine = false;
        try(CatchAll)
          b = byte.cast(ch);
          i = integer.cast(ch);
          fine = i == code;
        end
        Out.writeln("char ", code, " ", ok, " ", fine);
        ok = char.castOk(code + 128);
        fine = false;
        try(CatchAll)
          ch = char.cast(code + 128);
          fine = true;
        end
        Out.writeln("high ", code + 128, " ", ok, " ", fine);
        end
      Out.writeln("limits ", integer.getMaxValue(), " ", byte.getMaxValue(), " ", char.getMaxIntegerChar());
      end
end
"""


def criterion_7():
    r = _run(CASTS)
    lines = r.stdout.splitlines()
    rows = [ln.split() for ln in lines if not ln.startswith("limits")]
    agree = sum(1 for _, _, ok, fine in rows if ok == fine)
    groups = {g: sum(1 for row in rows if row[0] == g) for g in ("byte", "int", "char", "high")}
    accepted = {g: sum(1 for row in rows if row[0] == g and row[2] == "true") for g in groups}
    limits = lines[-1] if lines else ""
    ok = (r.status == 0 and agree == len(rows) and groups == {"byte": 256, "int": 258, "char": 128, "high": 128}
          and accepted == {"byte": 128, "int": 256, "char": 128, "high": 0}
          and limits == "limits 2147483647 255 127")
    return ok, (f"castOk agrees with cast not throwing on {agree}/{len(rows)} values {groups}, "
                f"accepted {accepted}; {limits}")


# ---------------------------------------------------------------- 8

TRANSPARENT = "\nshell class Transparent(Any)\nend\n"
ECHO = """
shell class EchoAll(Any)
  public:
    proc interceptAll( mi : ObjectMethodInfo; vetArg : array(Any)[] )
      begin
      mi.invoke(vetArg);
      end
end
"""


class ShelledInterpreter(Interpreter):
    """Attaches one instance of ``shell_name`` to every object it creates."""

    shell_name = ""

    def alloc(self, cls):
        obj = super().alloc(cls)
        if cls.kind != "shell":
            obj.shells.append(self.new_shell_inst(self.classes[self.shell_name], obj, [], None))
        return obj


def run_shelled(case, extra: str, shell: str) -> RunResult:
    man = load_manifest(str(case.manifest)) if case.manifest else None
    prog, diags = compile_sources([(case.source() + extra, f"{case.name}.green")], man)
    if prog is None:
        return RunResult("", "".join(d.render() + "\n" for d in diags if d.is_error), 1)
    out, err = io.StringIO(), io.StringIO()
    rt = ShelledInterpreter(prog, out=out, err=err, inp=io.StringIO(case.stdin), assertions=case.assertions,
                            reflect=case.reflect, strict_for=case.strict_for)
    rt.shell_name = shell
    status = rt.run(case.entry, case.args)
    return RunResult(out.getvalue(), err.getvalue(), status)


def criterion_8(sequences: int = 100, seed: int = 8):
    changed = {}
    for extra, shell in ((TRANSPARENT, "Transparent"), (ECHO, "EchoAll")):
        changed[shell] = [c.name for c in all_cases() if run_shelled(c, extra, shell) != c.expected()]
    rng = random.Random(seed)
    law_fail = 0
    for _ in range(sequences):
        src, want = meta_sequence(rng)
        r = _run(src)
        if r.stdout != want or r.status != 0:
            law_fail += 1
    ok = not any(changed.values()) and law_fail == 0
    return ok, (f"corpus outputs changed under shells {changed}; "
                f"stack laws failed on {law_fail}/{sequences} sequences")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7,
            criterion_8]


@pytest.mark.parametrize("n", range(1, 9))
def test_criterion(n, capsys):
    ok, detail = CRITERIA[n - 1]()
    with capsys.disabled():
        print()
        report(n, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for i, fn in enumerate(CRITERIA, 1):
        ok, detail = fn()
        report(i, ok, detail)
        failed += not ok
    sys.exit(1 if failed else 0)
