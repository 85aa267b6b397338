from helpers import main, out, run

ANIMALS = """
abstract class Animal
  public:
    abstract proc speak() : String;
    proc intro() : String
      begin
      return "I say " + speak();
      end
end

class Dog subclassOf Animal
    proc init() begin end
  public:
    proc speak() : String begin return "woof"; end
end

class Puppy subclassOf Dog
    proc init() begin super.init(); end
  public:
    proc speak() : String begin return "yip " + super.speak(); end
end
"""


def test_dynamic_dispatch_and_super():
    src = main("      a = Puppy.new();\n      Out.writeln(a.intro());", ANIMALS, "      var a : Animal;")
    assert out(src) == "I say yip woof\n"


def test_integer_arithmetic_wraps_and_truncates():
    src = main('      Out.writeln(2147483647 + 1, " ", -7 / 2, " ", -7 % 2, " ", 1 << 31);')
    assert out(src) == "-2147483648 -3 -1 -2147483648\n"


def test_byte_wraps():
    src = main("      b = 0b;\n      --b;\n      Out.writeln(b);", locals_="      var b : byte;")
    assert out(src) == "255\n"


def test_real_is_single_precision():
    src = main("      Out.writeln(0.1d, \" \", 1.0 / 3.0);")
    assert out(src) == "0.1 0.33333334\n"


def test_short_circuit():
    src = main('      if false and 1 / z == 0 then Out.writeln("no"); else Out.writeln("ok"); endif',
               locals_="      var z : integer;")
    assert out(src) == "ok\n"


def test_for_loop_bounds_evaluated_once():
    src = main("      n = 3;\n      for i = 1 to n do\n        begin\n        n = 10;\n"
               "        Out.write(i);\n        end\n      Out.writeln();",
               locals_="      var i, n : integer;")
    assert out(src) == "123\n"


def test_arrays_default_and_index_error():
    src = main("      a#init(3);\n      Out.writeln(a[0], a.getSize());\n      a[3] = 1;",
               locals_="      var a : array(integer)[];")
    r = run(src)
    assert r.stdout == "03\n"
    assert r.status == 1
    assert r.stderr == "Exception IllegalArrayIndexException not caught\n"


def test_send_to_nil():
    src = main("      a.speak();", ANIMALS, "      var a : Animal;")
    r = run(src)
    assert r.status == 1 and "MessageSendToNilException" in r.stderr


def test_string_methods():
    src = main('      s = "Green";\n      Out.writeln(s.getSize(), s.newToUpperCase(), s.get(0), '
               's.search("ee"), s + "!");', locals_="      var s : String;")
    assert out(src) == "5GREENG2Green!\n"


def test_exit_status_and_program_args():
    src = """
object Main
  public:
    proc run( args : array(String)[] )
      begin
      Out.writeln(args.getSize(), args[0]);
      Runtime.exit(4);
      end
end
"""
    r = run(src, args=["a", "b"])
    assert (r.stdout, r.status) == ("2a\n", 4)


def test_reading_input():
    src = main("      Out.writeln(In.readInteger() + 1);")
    assert out(src, stdin="41\n") == "42\n"


def test_deep_recursion_is_a_green_exception():
    src = """
object Main
  public:
    proc f( n : integer ) : integer
      begin
      return f(n + 1);
      end
    proc run()
      begin
      f(0);
      end
end
"""
    r = run(src)
    assert r.status == 1
    assert "StackOverflowException" in r.stderr
