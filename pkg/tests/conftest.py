import pytest

from capgroup import CapFactor

EXP5 = CapFactor.exponential(0.05)
POLY = CapFactor.odd_poly_exp([0.05, 0.001])
TABLE = CapFactor.tabulated_odd_exp([(1.0, 0.04), (2.0, 0.09), (5.0, 0.25), (10.0, 0.55)])

BUILTIN = {
    "exp0": CapFactor.exponential(0.0),
    "exp3": CapFactor.exponential(0.03),
    "exp5": EXP5,
    "exp20": CapFactor.exponential(0.2),
    "poly": POLY,
    "table": TABLE,
}

_acceptance_lines = []


def record_acceptance(line):
    _acceptance_lines.append(line)
    print(line)


@pytest.fixture(params=sorted(BUILTIN), ids=sorted(BUILTIN))
def factor(request):
    return BUILTIN[request.param]


@pytest.fixture
def acceptance_log():
    return record_acceptance


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
