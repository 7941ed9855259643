import math

import pytest
from hypothesis import strategies as st

from stable_potentials import make_params

# one representative per regime, plus an asymmetric one on each side of alpha=1
REGIMES = [(0.4, 0.3), (0.7, 0.6), (1.0, 0.5), (1.5, 0.4), (1.5, 0.6), (1.8, 0.5)]


@pytest.fixture
def cauchy():
    return make_params(1.0, 0.5)


@pytest.fixture(params=REGIMES, ids=lambda ar: f"a{ar[0]}-r{ar[1]}")
def regime(request):
    return make_params(*request.param)


@st.composite
def stable_params(draw):
    kind = draw(st.sampled_from(["below", "cauchy", "above"]))
    if kind == "cauchy":
        return make_params(1.0, 0.5)
    if kind == "below":
        alpha = draw(st.floats(0.1, 0.95))
        rho = draw(st.floats(0.1, 0.9))
        return make_params(alpha, rho)
    alpha = draw(st.floats(1.05, 1.9))
    lo, hi = 1.0 - 1.0 / alpha, 1.0 / alpha
    frac = draw(st.floats(0.1, 0.9))
    return make_params(alpha, lo + frac * (hi - lo))


unit = st.floats(0.02, 0.98)


def rel(a, b):
    return abs(a - b) / abs(b) if b else abs(a - b)


def close(a, b, tol):
    return math.isclose(a, b, rel_tol=tol, abs_tol=0.0)


# -- acceptance summary ---------------------------------------------------------

_CRITERIA: dict[int, dict] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call" and not report.failed:
        return
    number, title = marker.args
    entry = _CRITERIA.setdefault(number, {"title": title, "failed": [], "ran": 0})
    if report.when == "call":
        entry["ran"] += 1
    if report.failed:
        entry["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        status = "FAIL" if entry["failed"] else "PASS"
        line = f"criterion {number} [{status}] {entry['title']} ({entry['ran']} tests)"
        if entry["failed"]:
            line += ": failed " + ", ".join(entry["failed"])
        terminalreporter.write_line(line)
