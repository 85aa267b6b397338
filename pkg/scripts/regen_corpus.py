"""Write expected.* files for corpus programs that lack them (or all, with --force).

Expected outputs must be checked by hand before they are committed.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from corpus_util import all_cases  # noqa: E402


def main() -> None:
    force = "--force" in sys.argv
    names = [a for a in sys.argv[1:] if not a.startswith("--")]
    for case in all_cases():
        if names and case.name not in names:
            continue
        if (case.path / "expected.exit").exists() and not force:
            continue
        r = case.run()
        (case.path / "expected.stdout").write_text(r.stdout, encoding="utf-8")
        (case.path / "expected.stderr").write_text(r.stderr, encoding="utf-8")
        (case.path / "expected.exit").write_text(f"{r.status}\n")
        print(f"{case.name}: exit {r.status}")


if __name__ == "__main__":
    main()
