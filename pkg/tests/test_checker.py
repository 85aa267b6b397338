from helpers import codes, errors, main, out, warnings

FIGURES = """
class Figure
    proc init() begin end
  public:
    proc draw() begin end
    proc getArea() : real begin return 0.0; end
end

class Square subclassOf Figure
    proc init() begin end
  public:
    proc getSide() : real begin return 1.0; end
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
    proc getArea() : real begin return 0.0; end
    proc close() begin end
end

object Show
  public:
    proc print(f : Figure) begin Out.writeln("figure"); end
    proc print(w : Window) begin Out.writeln("window"); end
end
"""


def test_frame_is_ambiguous_between_figure_and_window():
    src = main("      Show.print(Frame.new());", FIGURES)
    assert codes(src) == ["T024"]


def test_frame_resolves_with_a_cast():
    src = main("      try(CatchAll)\n      f = Figure.cast(Frame.new());\n      end\n      Show.print(f);",
               FIGURES, "      var f : Figure;")
    assert out(src) == "figure\n"


def test_square_needs_a_cast():
    src = main("      f = Square.new();\n      s = f;", FIGURES, "      var f : Figure; s : Square;")
    assert codes(src) == ["T021"]


def test_square_cast_is_accepted():
    src = main("      f = Square.new();\n      try(CatchAll)\n      s = Square.cast(f);\n      end\n"
               "      Out.writeln(s.getSide());", FIGURES, "      var f : Figure; s : Square;")
    assert out(src) == "1.0\n"


def test_integer_and_Integer_overloads_collide():
    src = """
object A
  public:
    proc m(i : integer) begin end
    proc m(i : Integer) begin end
end
"""
    assert codes(src) == ["T009"]


def test_chained_equality_is_one_error():
    src = main("      b = 1 == 2 == 3;", locals_="      var b : boolean;")
    assert len(errors(src)) == 1


def test_subclass_is_a_subtype():
    src = main("      f = Square.new();\n      f.draw();", FIGURES, "      var f : Figure;")
    assert codes(src) == []


def test_unknown_method():
    src = main("      f = Square.new();\n      f.fly();", FIGURES, "      var f : Figure;")
    assert codes(src) == ["T022"]


def test_assign_basic_mismatch():
    assert codes(main('      i = "x";', locals_="      var i : integer;")) == ["T021"]


def test_arrays_are_not_covariant():
    src = main("      a = b;", FIGURES, "      var a : array(Figure)[]; b : array(Square)[];")
    assert codes(src) == ["T021"]


def test_redefinition_keeps_signature():
    src = FIGURES + """
class Bad subclassOf Figure
    proc init() begin end
  public:
    proc getArea() : integer begin return 0; end
end
"""
    assert "T008" in codes(src)


def test_abstract_class_needs_abstract_keyword():
    src = """
class C
  public:
    abstract proc f();
end
"""
    assert "T006" in codes(src)


def test_inheritance_cycle():
    src = "class A subclassOf B end\nclass B subclassOf A end\n"
    assert "T003" in codes(src)


def test_checked_exception_needs_handler():
    src = """
class MyException subclassOf Exception
    proc init() begin end
  public:
    proc mine() begin end
end

object Main
  public:
    proc run()
      begin
      exception.throw(MyException.new());
      end
end
"""
    assert codes(src) != []


def test_case_only_warning_reported_by_check():
    src = main("      count = 1;\n      Count = 2;", locals_="      var count, Count : integer;")
    assert "W006" in warnings(src)


def test_ignored_result_warning():
    src = main("      f = Square.new();\n      f.getArea();", FIGURES, "      var f : Figure;")
    assert "W001" in warnings(src)
