import os
from pathlib import Path

import pytest

from grarules.ingest import load_generic, load_ml100k

HERE = Path(__file__).parent
TOY = HERE / "data" / "toy"


def ml100k_dir():
    path = Path(os.environ.get("ML100K_DIR", HERE.parent / "data" / "ml-100k"))
    return path if (path / "u.data").exists() else None


requires_corpus = pytest.mark.skipif(
    ml100k_dir() is None,
    reason="ml-100k not found; set ML100K_DIR or run tools/ml100k_from_recbole.py",
)


@pytest.fixture(scope="session")
def ml_dir():
    path = ml100k_dir()
    if path is None:
        pytest.skip("ml-100k not available")
    return path


@pytest.fixture(scope="session")
def ml(ml_dir):
    return load_ml100k(ml_dir)


@pytest.fixture(scope="session")
def ml_priority(ml_dir):
    return load_ml100k(ml_dir, preprocess="priority")


@pytest.fixture
def toy():
    return load_generic(TOY)


# acceptance lines, printed in the terminal summary
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE:
        terminalreporter.write_line(line)
