from pathlib import Path

import pytest

from memsmic import kernels
from memsmic.design import table1_design

DATA = Path(__file__).resolve().parents[1] / "src" / "memsmic" / "data"
GOLDEN = Path(__file__).resolve().parent / "golden"


@pytest.fixture
def table1():
    return table1_design()


@pytest.fixture
def table1_path():
    return DATA / "table1.json"


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    previous = kernels.set_backend(request.param)
    yield request.param
    kernels.set_backend(previous)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
