import random

import pytest

from qverma.formulas import random_generic_params
from qverma.qscalars import fixed_profile


@pytest.fixture(params=[1, 2, 3], ids=lambda n: f"n{n}")
def profile(request):
    return fixed_profile(request.param)


@pytest.fixture
def p2():
    return fixed_profile(2)


@pytest.fixture
def p3():
    return fixed_profile(3)


@pytest.fixture(params=[11, 29], ids=lambda s: f"seed{s}")
def generic2(request):
    return random_generic_params(2, random.Random(request.param), 5)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
