"""Acceptance criteria 1-12, one test and one printed PASS/FAIL line each."""

from __future__ import annotations

import pytest

from legsheaf.acceptance import CRITERIA, run_one


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    result = run_one(number)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail
