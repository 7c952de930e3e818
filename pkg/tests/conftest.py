import time
from types import SimpleNamespace

import pytest

from dodeca import fixtures
from dodeca.cosets import low_index_classes
from dodeca.pipeline import analyze_action, presentation

# criterion number -> (title, outcome), filled as acceptance tests report
CRITERIA: dict = {}


def pytest_addoption(parser):
    parser.addoption("--slow", action="store_true", default=False,
                     help="also run the expensive repeats (all ten degree-504 homologies)")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: needs --slow")
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--slow"):
        return
    skip = pytest.mark.skip(reason="needs --slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is None:
        return
    n, title = m.args
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        status = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
        CRITERIA[n] = (title, status)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        title, status = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {title}")


@pytest.fixture(scope="session")
def ws():
    return presentation("WS")


@pytest.fixture(scope="session")
def c_action():
    return fixtures.source_action("cover_c")


@pytest.fixture(scope="session")
def s_action():
    return fixtures.source_action("appendix")


@pytest.fixture(scope="session")
def small_census(ws):
    """WS classes up to index 6 (fast)."""
    return low_index_classes(ws, 6)


@pytest.fixture(scope="session")
def census(ws):
    """Full census to index 9, analyzed; shared by the acceptance criteria."""
    t0 = time.perf_counter()
    recs = low_index_classes(ws, 9)
    covers = [analyze_action("WS", r.action(), "enumerated", special=False) for r in recs]
    return SimpleNamespace(records=recs, covers=covers, seconds=time.perf_counter() - t0)
