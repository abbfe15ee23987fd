from __future__ import annotations

import sys

import pytest

from vacpol.context import ALPHA, PhysicalContext


@pytest.fixture
def ctx() -> PhysicalContext:
    return PhysicalContext(Q=1.0)


@pytest.fixture
def alpha() -> float:
    return ALPHA


def pytest_terminal_summary(terminalreporter):
    results = getattr(sys.modules.get("test_acceptance"), "RESULTS", None) or getattr(
        sys.modules.get("tests.test_acceptance"), "RESULTS", None
    )
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for i in sorted(results):
        ok, detail = results[i]
        terminalreporter.write_line(f"CRITERION {i:2d}: {'PASS' if ok else 'FAIL'} | {detail}")
