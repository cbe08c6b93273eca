"""Shared fixtures for recfun tests."""

import json
import sys
from pathlib import Path

import pytest

# Ensure the package directory is importable
MODEL_DIR = Path(__file__).resolve().parent.parent
if str(MODEL_DIR) not in sys.path:
    sys.path.insert(0, str(MODEL_DIR))

TESTS_DIR = Path(__file__).resolve().parent
CASES_PATH = TESTS_DIR / "test-cases.json"
MACHINES_DIR = MODEL_DIR / "data" / "machines"
FOM_DIR = MODEL_DIR / "data" / "fom"


@pytest.fixture(scope="session")
def test_cases():
    """Expected values from test-cases.json."""
    with open(CASES_PATH) as f:
        return json.load(f)


@pytest.fixture(scope="session")
def machines_dir():
    return MACHINES_DIR


@pytest.fixture(scope="session")
def fom_dir():
    return FOM_DIR


@pytest.fixture
def oracle_path():
    """Force every combinator onto its oracle path."""
    from settings import override
    with override(path="oracle"):
        yield


@pytest.fixture
def formula_path():
    """Force every combinator onto its closed-formula path."""
    from settings import override
    with override(path="formula"):
        yield
