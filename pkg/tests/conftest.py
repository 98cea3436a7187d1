from __future__ import annotations

import pytest

from drwitt.laurent import TowerSpec
from drwitt.parser import evaluate, parse_ring

ACCEPTANCE_LINES: list = []


def ev(src, p, m=1, r=1, depth=1):
    return evaluate(src, TowerSpec(p, r, depth), m)


def ring_elem(src, p, r=1, depth=1):
    return parse_ring(src, TowerSpec(p, r, depth))


@pytest.fixture
def record_criterion():
    def record(line):
        ACCEPTANCE_LINES.append(line)
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
