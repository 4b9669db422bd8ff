import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from normcat.catalog import build_catalog, cyclic, symmetric  # noqa: E402


@pytest.fixture(scope="session")
def cat12():
    return build_catalog(12)


@pytest.fixture(scope="session")
def cat16():
    return build_catalog(16, 16)


@pytest.fixture(scope="session")
def S3():
    return symmetric(3)


@pytest.fixture(scope="session")
def transposition(S3):
    return S3.index_of((1, 0, 2))


@pytest.fixture(scope="session")
def three_cycle(S3):
    return S3.index_of((1, 2, 0))


@pytest.fixture(scope="session")
def Z2():
    return cyclic(2)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
