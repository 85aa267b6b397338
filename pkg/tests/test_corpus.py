import pytest

from corpus_util import all_cases

CASES = all_cases()


@pytest.mark.parametrize("case", CASES, ids=[c.name for c in CASES])
def test_golden(case):
    got, want = case.run(), case.expected()
    assert got.stdout == want.stdout
    assert got.stderr == want.stderr
    assert got.status == want.status
