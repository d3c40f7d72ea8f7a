from pathlib import Path

import numpy as np
import pytest

from mcbalance.synthcam import IlluminantCast, chart_scene

DATA = Path(__file__).parent / "data"

BRADFORD_CAST = IlluminantCast("bradford", (1.3, 1.0, 0.7))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def chart():
    return chart_scene(patch_size=16, gap=4, margin=8)


@pytest.fixture(scope="session")
def chart_twice():
    return chart_scene(patch_size=16, gap=4, margin=8, copies=2)


@pytest.fixture(scope="session")
def ciede2000_pairs():
    return np.loadtxt(DATA / "ciede2000_pairs.csv", delimiter=",")


def random_well_conditioned(rng, n, max_cond=1e4):
    """``n`` random positive 3x3 color matrices with bounded condition number."""
    out = []
    while len(out) < n:
        m = rng.uniform(0.02, 1.0, size=(3, 3))
        if np.linalg.cond(m, 1) < max_cond:
            out.append(m)
    return np.array(out)


_ACCEPTANCE = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or report.when == "teardown":
        return
    number, title = marker.args
    ok = report.passed if report.when == "call" else not report.failed
    prev = _ACCEPTANCE.get(number, (title, True))
    _ACCEPTANCE[number] = (title, prev[1] and ok)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, ok = _ACCEPTANCE[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {number:>2}. {title}")
