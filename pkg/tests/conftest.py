import pytest

from ksubmod.functions import ValuedFunction, zero

ACCEPTANCE_LINES = []


def table(k, n, values):
    return ValuedFunction.from_table(k, n, values)


@pytest.fixture
def E1():
    """k=3, n=1: g(0)=0, g(1)=-1, g(2)=1, g(3)=2."""
    return table(3, 1, [0, -1, 1, 2])


@pytest.fixture
def E2():
    """k=2, n=2: unary g(0)=0, g(1)=1, g(2)=0 on both coordinates."""
    g = (0, 1, 0)
    return ValuedFunction.from_terms(2, 2, [((0,), g), ((1,), g)])


@pytest.fixture
def h():
    """k=2, n=1: h(0)=0, h(1)=h(2)=-1, not 2-submodular."""
    return table(2, 1, [0, -1, -1])


@pytest.fixture
def Z():
    return zero(3, 2)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def acceptance_report():
    """Record a one-line verdict for the end-of-run summary."""
    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
    return record
