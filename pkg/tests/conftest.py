import sys
from pathlib import Path

import pytest

from levikit import fixtures

sys.path.insert(0, str(Path(__file__).parent))

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(params=fixtures.NAMES)
def fixture_name(request):
    return request.param


@pytest.fixture
def diagram(fixture_name):
    return fixtures.load(fixture_name)


@pytest.fixture(scope="session")
def hnn():
    return fixtures.load("hnn")


@pytest.fixture(scope="session")
def free():
    return fixtures.load("free")


@pytest.fixture(scope="session")
def amalgam():
    return fixtures.load("amalgam")


@pytest.fixture(scope="session")
def collapse():
    return fixtures.load("collapse")


@pytest.fixture
def criterion():
    def record(number: int, ok: bool, detail: str = ""):
        ACCEPTANCE[number] = (bool(ok), detail)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
