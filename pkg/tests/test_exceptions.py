from helpers import main, out, run

FRUITS = """
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

class CatchFruit subclassOf CatchUncheckedException
    proc init() begin end
  public:
{handlers}
end

object Thrower
  public:
    proc go() ( exception : CatchFruit )
      begin
      exception.throw(BananaException.new());
      Out.writeln("after throw");
      end
end
"""

BANANA = '    proc throw( e : BananaException ) begin Out.writeln("banana"); end\n'
FRUIT = '    proc throw( e : FruitException ) begin Out.writeln("fruit"); end\n'

BODY = '      try(CatchFruit.new())\n        Thrower.go();\n        Out.writeln("skipped");\n      end\n' \
       '      Out.writeln("done");'


def test_most_specific_first_handler_wins():
    assert out(main(BODY, FRUITS.replace("{handlers}", BANANA + FRUIT))) == "banana\ndone\n"


def test_declaration_order_decides():
    assert out(main(BODY, FRUITS.replace("{handlers}", FRUIT + BANANA))) == "fruit\ndone\n"


def test_uncaught_exception():
    src = main("      x = 1 / z;", locals_="      var x, z : integer;")
    r = run(src)
    assert (r.stdout, r.stderr, r.status) == ("", "Exception DivisionByZeroException not caught\n", 1)


def test_catch_all_swallows_and_continues():
    src = main('      try(CatchAll)\n        x = 1 / z;\n        Out.writeln("no");\n      end\n'
               '      Out.writeln("yes");', locals_="      var x, z : integer;")
    assert out(src) == "yes\n"


def test_nested_try_inner_first():
    src = main('      try(CatchAll)\n        try(CatchDivisionByZeroException.new())\n'
               '          x = 1 / z;\n        end\n        Out.writeln("inner");\n      end',
               locals_="      var x, z : integer;")
    assert out(src) == "inner\n"


def test_assertion_before_fails():
    src = """
object Acc
  public:
    proc take( n : integer )
      assert
        before n > 0;
      end
      begin
      Out.writeln("took ", n);
      end
end
""" + main("      Acc.take(1);\n      Acc.take(0);")
    r = run(src)
    assert r.stdout == "took 1\n"
    assert r.status == 1 and "AssertionBeforeException" in r.stderr
    r = run(src, assertions=False)
    assert (r.stdout, r.status) == ("took 1\ntook 0\n", 0)
