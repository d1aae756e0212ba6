from pathlib import Path

import pytest

from cyclic_rewriting.sysfile import load_system

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_path(name: str) -> Path:
    return FIXTURES / f"{name}.rsys"


@pytest.fixture(scope="session")
def shift():
    return load_system(fixture_path("shift"))


@pytest.fixture(scope="session")
def hm():
    return load_system(fixture_path("hm"))


@pytest.fixture(scope="session")
def braid():
    return load_system(fixture_path("braid"))


@pytest.fixture(scope="session")
def trefoil():
    return load_system(fixture_path("trefoil"))


def w(system, text):
    return system.alphabet.parse(text)


def pytest_configure(config):
    config.acceptance_lines = []


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""

    def record(number, label, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {label}"
        if detail:
            line += f" [{detail}]"
        request.config.acceptance_lines.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, config):
    if config.acceptance_lines:
        terminalreporter.section("acceptance")
        for line in config.acceptance_lines:
            terminalreporter.write_line(line)
