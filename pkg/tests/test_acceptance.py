"""Every acceptance criterion at its stated tolerance, one pass/fail line each."""

import pytest

from fmcycles.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=[f"{c[0]}-{c[1]}" for c in CRITERIA])
def test_criterion(number, capsys):
    outcome = run_criterion(number)
    with capsys.disabled():
        print("\n" + outcome.line(), flush=True)
    assert outcome.passed, outcome.line()
