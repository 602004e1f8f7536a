"""
Shared fixtures: the presentation corpus and its bimodules.
"""

from pathlib import Path

import pytest

from anick.export import load_bimodule, load_presentation
from anick.weyl_showcase import w1_presentation

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def w1():
    return w1_presentation()


@pytest.fixture(scope="session")
def h3():
    return load_presentation(FIXTURES / "h3.json")


@pytest.fixture(scope="session")
def dual():
    return load_presentation(FIXTURES / "dual.json")


@pytest.fixture(scope="session")
def trunc3():
    return load_presentation(FIXTURES / "trunc3.json")


@pytest.fixture(scope="session")
def upper2():
    return load_presentation(FIXTURES / "upper2.json")


@pytest.fixture(scope="session")
def bad_gsb():
    return load_presentation(FIXTURES / "bad_gsb.json")


@pytest.fixture
def fixture_bimodule():
    """Load fixtures/<name>.json as a bimodule over pres."""
    def load(name, pres):
        return load_bimodule(FIXTURES / f"{name}.json", pres)
    return load
