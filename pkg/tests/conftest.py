from pathlib import Path

import pytest

from valueprobe.cli import _lexicon
from valueprobe.matrix import read_matrix_csv
from valueprobe.probes import load_value_spec

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def spec():
    return load_value_spec()


@pytest.fixture(scope="session")
def lexicon():
    return _lexicon(None)


@pytest.fixture(scope="session")
def s2(spec):
    return read_matrix_csv(FIXTURES / "table_s2.csv", spec)


@pytest.fixture(scope="session")
def s2_agg(spec):
    return read_matrix_csv(FIXTURES / "table_s2_aggregated.csv", spec)


@pytest.fixture(scope="session")
def s3(spec):
    return read_matrix_csv(FIXTURES / "table_s3.csv", spec)


@pytest.fixture(scope="session")
def s3_agg(spec):
    return read_matrix_csv(FIXTURES / "table_s3_aggregated.csv", spec)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
