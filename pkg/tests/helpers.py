"""Small wrappers used across the test modules."""

from __future__ import annotations

from green.cli import compile_sources, run_sources


def run(src: str, entry: str = "Main", **kw):
    return run_sources([(src, "t.green")], entry, **kw)


def out(src: str, **kw) -> str:
    r = run(src, **kw)
    assert r.status == 0, r.stderr
    return r.stdout


def main(body: str, decls: str = "", locals_: str = "") -> str:
    """A program whose Main.run has ``body`` as its statements."""
    return f"""{decls}
object Main
  public:
    proc run()
{locals_}
      begin
{body}
      end
end
"""


def errors(src: str) -> list:
    prog, diags = compile_sources([(src, "t.green")])
    return [d for d in diags if d.is_error]


def codes(src: str) -> list[str]:
    return [d.code for d in errors(src)]


def warnings(src: str) -> list[str]:
    prog, diags = compile_sources([(src, "t.green")])
    return [d.code for d in diags if not d.is_error]
