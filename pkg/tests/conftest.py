import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from corpus import random_dfas, random_dpfsas  # noqa: E402

from hrnnfsa.wfsa import fixtures  # noqa: E402

# one line per acceptance criterion, filled in by tests/test_acceptance.py
VERDICTS: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(VERDICTS, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def fx():
    return fixtures()


@pytest.fixture(scope="session")
def fx_exact():
    return fixtures(exact=True)


@pytest.fixture(scope="session")
def dpfsas():
    return random_dpfsas()


@pytest.fixture(scope="session")
def dfas():
    return random_dfas()
