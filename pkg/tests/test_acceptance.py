"""One PASS/FAIL line per acceptance criterion, each at its stated tolerance and time limit."""
import pytest

from somoslab import repro


@pytest.mark.parametrize("number", sorted(repro.CRITERIA))
def test_criterion(number, capsys):
    res = repro.run_criterion(number)
    with capsys.disabled():
        print("\n" + res.line())
        for name, ok in res.checks.items():
            if not ok:
                print(f"    failed check: {name}")
        for note in res.notes:
            print(f"    note: {note}")
    assert res.passed, res.line()
