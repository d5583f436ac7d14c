import numpy as np
import pytest

from orthocover import surfaces
from orthocover.ortho import OrthoParams


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def cos_sum():
    return surfaces.cos_sum()


@pytest.fixture
def params_3_10():
    return OrthoParams.from_degrees(3.0, 10.0)


# --- acceptance report --------------------------------------------------------

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, text): acceptance criterion number and summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and not rep.failed):
        return
    n, text = mark.args
    ok = _CRITERIA.get(n, (True, text))[0] and rep.passed
    _CRITERIA[n] = (ok, text)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        ok, text = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {text}")
