from pathlib import Path

import pytest

DATA = Path(__file__).resolve().parent.parent / "data"


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run the full-size sweeps")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-size sweep, needs --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def data_dir() -> Path:
    return DATA
