import random

import pytest

from indexmap.dvr import RingConfig


@pytest.fixture
def r2():
    return RingConfig(2, "series", 24)


@pytest.fixture
def r3():
    return RingConfig(3, "series", 24)


@pytest.fixture
def rng():
    return random.Random(1234)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance") or __import__("sys").modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
