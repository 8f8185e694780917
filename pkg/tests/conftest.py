from __future__ import annotations

import re
from fractions import Fraction
from itertools import combinations

import pytest

from weilvhs import hermform
from weilvhs.qfield import CMField, TotallyRealField

_CRITERIA: dict[int, list[bool]] = {}
_CRITERION_NAME = re.compile(r"test_criterion_(\d+)_")


def inversions(seq) -> int:
    return sum(1 for a, b in combinations(seq, 2) if a > b)


def make_form(n: int, p_list, m=None, e=1, override=False):
    tower = CMField.over(TotallyRealField(m), Fraction(e))
    spec = hermform.SignatureSpec.from_p(n, p_list, override)
    return hermform.build_form(spec, tower)


def weil_p_lists(n: int, d: int):
    """All generalized Weil signature lists (as p values) for degree d."""
    if d == 1:
        return [[n]]
    return [[n, p] for p in range(1, n) if (p - n) % 2 == 0]


@pytest.fixture
def tower_qi():
    return CMField.over(TotallyRealField(None), 1)


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    match = _CRITERION_NAME.search(report.nodeid)
    if match and "test_acceptance" in report.nodeid:
        _CRITERIA.setdefault(int(match.group(1)), []).append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_CRITERIA):
        results = _CRITERIA[k]
        verdict = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"criterion {k}: {verdict} ({sum(results)}/{len(results)} tests)")
