import functools
import re

import pytest
from hypothesis import HealthCheck, settings

from cglkit.catalog import builtin
from cglkit.dda import build_tower
from cglkit.hspec import enumerate_hspec

settings.register_profile(
    "repo",
    max_examples=100,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("repo")


@functools.lru_cache(maxsize=None)
def tower_of(name):
    return build_tower(builtin(name))


@functools.lru_cache(maxsize=None)
def records_of(name):
    return tuple(enumerate_hspec(tower_of(name)))


@pytest.fixture
def tower():
    return tower_of


@pytest.fixture
def records():
    return records_of


# one summary line per acceptance criterion, in the terminal report
_CRITERIA = {}
_NAME = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")


def pytest_runtest_logreport(report):
    m = _NAME.search(report.nodeid)
    if not m or report.when not in ("setup", "call"):
        return
    key = (int(m.group(1)), m.group(2))
    if report.failed or report.when == "call":
        prev = _CRITERIA.get(key)
        if prev != "FAIL":
            _CRITERIA[key] = "FAIL" if report.failed else "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for (num, name), outcome in sorted(_CRITERIA.items()):
        terminalreporter.write_line(f"criterion {num} [{name.replace('_', ' ')}]: {outcome}")
