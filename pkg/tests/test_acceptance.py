"""Acceptance criteria 1-12, each with its runtime budget.

Every test prints one PASS/FAIL line; the lines are repeated in the pytest
terminal summary.  Running this file directly prints the same lines.
"""

import subprocess
import sys
import time

import pytest

from repst.selftest import CRITERIA, run_criterion

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # executed as a script
    ACCEPTANCE_LINES = []

BUDGET_SECONDS = {1: 60, 2: 1, 3: 30, 4: 120, 5: 600, 6: 300, 7: 120, 8: 120, 9: 300, 10: 60, 11: 120,
                  12: 1800}


def report(number: int, name: str, passed: bool, seconds: float) -> str:
    within = seconds <= BUDGET_SECONDS[number]
    mark = "PASS" if passed and within else "FAIL"
    line = f"criterion {number:>2}: {mark}  {name}  ({seconds:.1f}s, budget {BUDGET_SECONDS[number]}s)"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return mark


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    result, seconds = run_criterion(number, seed=0)
    mark = report(number, result["name"], result["passed"], seconds)
    assert result["passed"], result
    assert mark == "PASS", f"criterion {number} exceeded its {BUDGET_SECONDS[number]}s budget"


def _selftest_stdout() -> bytes:
    proc = subprocess.run([sys.executable, "-m", "repst.cli", "selftest"], capture_output=True)
    assert proc.returncode == 0, proc.stderr.decode()
    return proc.stdout


def test_criterion_12_selftest_is_byte_identical():
    start = time.perf_counter()
    first = _selftest_stdout()
    second = _selftest_stdout()
    same = first == second
    mark = report(12, "determinism of selftest output", same, time.perf_counter() - start)
    assert same
    assert mark == "PASS"


if __name__ == "__main__":
    for n in sorted(CRITERIA):
        res, dt = run_criterion(n)
        report(n, res["name"], res["passed"], dt)
    t0 = time.perf_counter()
    report(12, "determinism of selftest output", _selftest_stdout() == _selftest_stdout(), time.perf_counter() - t0)
