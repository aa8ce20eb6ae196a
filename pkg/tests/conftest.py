import pytest
from hypothesis import HealthCheck, settings, strategies as st

from parking.pfcore import ParkingFunction

settings.register_profile("default", deadline=None, max_examples=150,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def parking_functions(draw, max_n=12, min_m=0):
    """Any element of PF(m, n): the i-th smallest value is at most n - m + i, then shuffle."""
    n = draw(st.integers(min_value=max(min_m, 0), max_value=max_n))
    m = draw(st.integers(min_value=min(min_m, n), max_value=n))
    values = [draw(st.integers(min_value=1, max_value=n - m + i)) for i in range(1, m + 1)]
    prefs = draw(st.permutations(values))
    return ParkingFunction(m, n, tuple(prefs))


@pytest.fixture
def worked_pf():
    return ParkingFunction(9, 12, (6, 1, 4, 1, 8, 3, 6, 11, 8))


@pytest.fixture
def worked_pf_tree_by_tree():
    return ParkingFunction(9, 12, (3, 1, 9, 1, 10, 7, 3, 11, 10))


def pytest_terminal_summary(terminalreporter):
    import sys
    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[number])
