import os
from pathlib import Path

import numpy as np
import pytest

from levymoead.datasets import AssetUniverse, efficient_frontier, synthetic_universe

TWO_ASSET = "2\n0.1 0.2\n0.05 0.1\n1 1 1.0\n1 2 0.5\n2 2 1.0"


def orlib_dir():
    return Path(os.environ.get("LEVYMOEAD_DATA_DIR", Path(__file__).resolve().parents[1] / "data" / "orlib"))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def two_asset():
    return AssetUniverse.from_correlation([0.1, 0.2], [0.2, 0.1], [[1.0, 0.25], [0.25, 1.0]])


@pytest.fixture(scope="session")
def small_case():
    u = synthetic_universe(31, seed=7)
    return u, efficient_frontier(u, 120)


@pytest.fixture(scope="session")
def small_case_8():
    u = synthetic_universe(8, seed=3)
    return u, efficient_frontier(u, 60)


@pytest.fixture(scope="session")
def data_dir(tmp_path_factory, small_case_8):
    """Synthetic stand-ins written in the OR-library layout as port1/portef1."""
    from levymoead.datasets import format_frontier, format_universe

    u, frontier = small_case_8
    d = tmp_path_factory.mktemp("orlib")
    (d / "port1.txt").write_text(format_universe(u))
    (d / "portef1.txt").write_text(format_frontier(frontier.points))
    return d


# one line per acceptance criterion, filled in by tests/test_acceptance.py
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
