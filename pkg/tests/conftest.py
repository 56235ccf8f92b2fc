import pytest

from cornergrowth.measures import Measure1D
from cornergrowth.params import ParamPair, RowConstant
from cornergrowth.shape import ShapeSpec, rost_spec


@pytest.fixture
def rost():
    return rost_spec()


@pytest.fixture
def defect_spec():
    # alpha = beta = delta_{1/2}, frak_a = 0 from the slow column, frakA = frakB = 1/2
    half = Measure1D.dirac(0.5)
    return ShapeSpec.build(half, half, 0.0, 0.5, frakA=0.5, frakB=0.5)


@pytest.fixture
def homog():
    return ParamPair.homogeneous(0.5, 0.5, cap=1000)


def slow_column_pair(cap: int = 400, column: int = 100) -> ParamPair:
    return ParamPair(RowConstant.constant(0.5, cap, [(column, 0.0)]), RowConstant.constant(0.5, cap))


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line for an acceptance criterion."""

    def emit(number: int | str, title: str, passed: bool, detail: str) -> bool:
        line = f"{'PASS' if passed else 'FAIL'}  criterion {number:>2}  {title}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
