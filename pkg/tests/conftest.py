import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from indeplab.towers import IntegerTower, SanovTower  # noqa: E402
from indeplab.independence.targets import TargetPair  # noqa: E402


@pytest.fixture(scope="session")
def integer_tower():
    return IntegerTower(3, 5)


@pytest.fixture(scope="session")
def sanov_tower():
    return SanovTower(3)


@pytest.fixture(scope="session")
def deep_sanov():
    return SanovTower(3, max_depth=10)


@pytest.fixture(scope="session")
def rf_target(integer_tower):
    return TargetPair.rf(integer_tower)


@pytest.fixture(scope="session")
def free_target(sanov_tower):
    return TargetPair.free(sanov_tower)


@pytest.fixture(scope="session")
def source_doc():
    """Text of the source document shipped next to the package, for value checks."""
    path = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "paper.md")
    if not os.path.exists(path):
        pytest.skip("source document not present")
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
