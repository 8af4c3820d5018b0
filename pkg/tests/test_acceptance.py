"""Acceptance gate: one test per criterion, one printed line per criterion.

Criterion 10 encodes a growth-threshold check whose stated clauses do not
hold for the measured orbit of [0, 1]; it is implemented as stated and is
expected to fail until the stated thresholds are revised. See the details
dict printed by its test for the measured table.
"""

import pytest

from plcert.acceptance import CRITERIA, run_acceptance, summary_lines


def _run_one(num):
    results = run_acceptance([num])
    assert len(results) == 1
    line = summary_lines(results)[0]
    print(line)
    return results[0], line


@pytest.mark.parametrize("num", range(1, 15))
def test_criterion(num):
    result, line = _run_one(num)
    assert result.num == num
    assert line.startswith(f"criterion {num:02d} ")
    if not result.passed:
        pytest.fail(f"{line}\ndetails: {result.details}")


def test_registry_is_complete():
    assert len(CRITERIA) == 14
    nums = [r.num for r in run_acceptance()]
    assert nums == list(range(1, 15))
