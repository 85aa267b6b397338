import subprocess
import sys

from green.cli import main

HELLO = """object Hello
  public:
    proc run()
      begin
      Out.writeln("hi");
      end
end
"""


def write(tmp_path, text=HELLO):
    p = tmp_path / "hello.green"
    p.write_text(text)
    return str(p)


def test_run(tmp_path, capsys):
    assert main(["run", write(tmp_path), "--entry", "Hello"]) == 0
    assert capsys.readouterr().out == "hi\n"


def test_check_ok(tmp_path, capsys):
    assert main(["check", write(tmp_path)]) == 0


def test_check_reports_errors(tmp_path, capsys):
    assert main(["check", write(tmp_path, HELLO.replace('"hi"', "undefinedName"))]) == 1
    assert "T020" in capsys.readouterr().err


def test_run_without_entry_is_usage_error(tmp_path, capsys):
    assert main(["run", write(tmp_path)]) == 2


def test_unknown_reflect_level(tmp_path, capsys):
    assert main(["run", write(tmp_path), "--entry", "Hello", "--reflect=everything"]) == 2


def test_dump_ast_round_trips(tmp_path, capsys):
    assert main(["dump-ast", write(tmp_path)]) == 0
    printed = capsys.readouterr().out
    assert "Out.writeln" in printed
    assert main(["run", write(tmp_path, printed), "--entry", "Hello"]) == 0


def test_dump_types(tmp_path, capsys):
    assert main(["dump-types", write(tmp_path)]) == 0
    assert "Hello" in capsys.readouterr().out


def test_console_script(tmp_path):
    r = subprocess.run([sys.executable, "-m", "green.cli", "run", write(tmp_path), "--entry", "Hello"],
                       capture_output=True, text=True)
    assert (r.stdout, r.returncode) == ("hi\n", 0)
