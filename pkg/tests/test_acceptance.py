"""Acceptance criteria 1-8, one PASS/FAIL line each.

Criteria 1-7 run the in-process suites (exact rational equality, each
within its time budget).  Criterion 8 runs the full ``selftest`` command
in a fresh interpreter and times it.

Run directly for a plain report:  python tests/test_acceptance.py
"""

import subprocess
import sys
import time

import pytest

from formal_derham.acceptance import SUITES

SELFTEST_BUDGET = 60.0
_results = {}


def _suite_result(number):
    if number not in _results:
        suite = next(s for s in SUITES if s.number == number)
        _results[number] = suite(0)
    return _results[number]


def _report(line, capsys=None):
    if capsys is None:
        print(line)
        return
    with capsys.disabled():
        print("\n" + line)


def run_selftest():
    start = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "formal_derham", "selftest"],
                          capture_output=True, text=True, timeout=300)
    return proc, time.perf_counter() - start


def selftest_line(proc, elapsed):
    ok = proc.returncode == 0 and elapsed < SELFTEST_BUDGET
    return ok, "[%s] 8. full selftest (%.1fs, budget %.0fs, exit %d)" % (
        "PASS" if ok else "FAIL", elapsed, SELFTEST_BUDGET, proc.returncode)


@pytest.mark.parametrize("number", [s.number for s in SUITES])
def test_criterion(number, capsys):
    res = _suite_result(number)
    _report(res.line(), capsys)
    assert res.passed, "\n".join(res.details())


def test_criterion_8_selftest(capsys):
    proc, elapsed = run_selftest()
    ok, line = selftest_line(proc, elapsed)
    _report(line, capsys)
    assert ok, proc.stdout + proc.stderr


if __name__ == "__main__":
    failed = 0
    for s in SUITES:
        res = _suite_result(s.number)
        _report(res.line())
        failed += not res.passed
    ok, line = selftest_line(*run_selftest())
    _report(line)
    sys.exit(1 if failed or not ok else 0)
