from pathlib import Path

import pytest

from zscan import fixtures
from zscan.generator import enumerate_classes

FIXTURE_DIR = Path(__file__).resolve().parents[1] / "fixtures"


@pytest.fixture(scope="session")
def levels():
    """Catalogs for 0..5 lines, computed once per session."""
    return enumerate_classes(5)


@pytest.fixture
def four_line():
    return fixtures.four_line_example()


@pytest.fixture
def triangle():
    return fixtures.tangent_triangle()


@pytest.fixture
def fixture_dir():
    return FIXTURE_DIR


ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {k}: {ACCEPTANCE[k]}")
