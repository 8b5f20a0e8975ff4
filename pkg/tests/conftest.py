from __future__ import annotations

import pytest

from cmapf.fixtures import fig1, k3, p3

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def P3():
    return p3()


@pytest.fixture
def K3():
    return k3()


@pytest.fixture
def FIG1():
    return fig1()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
