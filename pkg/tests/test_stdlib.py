from helpers import main, out


def test_limits():
    src = main('      Out.writeln(integer.getMaxValue(), " ", byte.getMaxValue(), " ", char.getMaxIntegerChar());')
    assert out(src) == "2147483647 255 127\n"


def test_cast_and_castOk_agree():
    body = """      ok = byte.castOk(300);
      thrown = true;
      try(CatchAll)
        b = byte.cast(300);
        thrown = false;
      end
      Out.writeln(ok, " ", thrown, " ", byte.castOk(200), " ", char.castOk(128));"""
    src = main(body, locals_="      var ok, thrown : boolean; b : byte;")
    assert out(src) == "false true true false\n"


def test_cast_from_string():
    src = main('      Out.writeln(integer.cast("42") + 1, " ", integer.castOk("4x"), " ", real.cast("2.5"));')
    assert out(src) == "43 false 2.5\n"


def test_wrappers_box_and_unbox():
    src = main("      I = Integer.new(3);\n      a = I;\n      i = I.get() + 1;\n"
               "      Out.writeln(i, \" \", a.toString(), \" \", I.equals(Integer.new(3)));",
               locals_="      var I : Integer; a : Any; i : integer;")
    assert out(src) == "4 3 true\n"


def test_dynstring():
    src = main('      d = DynString.new("ab");\n      d.add(\'c\');\n      d.prepend(">");\n'
               "      Out.writeln(d.toString(), d.getSize());", locals_="      var d : DynString;")
    assert out(src) == ">abc4\n"


def test_string_cast_of_basics():
    src = main('      Out.writeln(String.cast(12) + String.cast(true) + String.cast(\'x\'));')
    assert out(src) == "12truex\n"
