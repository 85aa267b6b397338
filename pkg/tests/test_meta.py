import pytest

from green.meta import parse_manifest

from helpers import main, out, run

CALC = """
class Calc
    proc init() begin end
  public:
    proc val() : integer begin return 1; end
end

shell class Twice(Calc)
  public:
    proc val() : integer begin return 2 * super.val(); end
end

shell class Plus(Calc)
  public:
    proc val() : integer begin return 10 + super.val(); end
end
"""


def test_manifest_parsing():
    m = parse_manifest("# shells\nallow shell Twice on Calc, Other\n\nallow extension Border on Window\n")
    assert m.shells == {"Twice": {"Calc", "Other"}}
    assert m.extensions == {"Border": {"Window"}}
    with pytest.raises(ValueError):
        parse_manifest("permit shell X on Y")


def test_shells_stack_last_attached_runs_first():
    body = """      c = Calc.new();
      try(CatchMetaException.new())
        Meta.attachShell(c, Twice.new());
        Meta.attachShell(c, Plus.new());
      end
      Out.writeln(c.val());
      try(CatchMetaException.new())
        Meta.removeShell(c);
      end
      Out.writeln(c.val());"""
    assert out(main(body, CALC, "      var c : Calc;")) == "12\n2\n"


def test_remove_from_empty_stack_throws():
    body = """      c = Calc.new();
      catch = CatchMetaException.new();
      try(catch)
        Meta.removeShell(c);
      end
      Out.writeln(catch.getClassException() == NoShellException);"""
    assert out(main(body, CALC, "      var c : Calc; catch : CatchMetaException;")) == "true\n"


def test_manifest_restricts_attachment():
    body = """      c = Calc.new();
      catch = CatchMetaException.new();
      try(catch)
        Meta.attachShell(c, Twice.new());
      end
      Out.writeln(catch.getClassException() == ClassNotInAllowedSetException, c.val());"""
    src = main(body, CALC, "      var c : Calc; catch : CatchMetaException;")
    assert out(src, manifest=parse_manifest("allow shell Twice on Calc")) == "false2\n"
    assert out(src, manifest=parse_manifest("allow shell Twice on Other")) == "true1\n"


def test_shell_class_is_not_a_type():
    r = run(main("", CALC, "      var t : Twice;"))
    assert r.status == 1 and "T001" in r.stderr
