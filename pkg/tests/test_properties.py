"""Randomized property suites: all pass, and runs are reproducible."""

import pytest

from circlepat.properties import SUITES, run_suites

TRIALS = 300


@pytest.mark.parametrize("suite", sorted(SUITES))
def test_suite_passes(suite):
    for result in run_suites([suite], TRIALS, seed=0):
        assert result.passed, result.line()
        assert result.trials > 0


def test_suites_pass_under_other_seeds():
    for seed in (1, 7, 12345):
        for result in run_suites(sorted(SUITES), 100, seed=seed):
            assert result.passed, result.line()


def test_runs_are_reproducible():
    a = run_suites(sorted(SUITES), 50, seed=3)
    b = run_suites(sorted(SUITES), 50, seed=3)
    assert [r.line() for r in a] == [r.line() for r in b]


def test_failures_carry_a_witness():
    from circlepat.properties import PropertyResult

    r = PropertyResult(name="demo", trials=5, failures=2, first_failure="x=1")
    assert not r.passed
    assert "FAIL" in r.line() and "x=1" in r.line()
