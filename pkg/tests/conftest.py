import math
import sys

import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


def central_difference(f, x, h=1e-6):
    return (f(x + h) - f(x - h)) / (2 * h)


def log_slope(Ns, errors):
    import numpy as np

    return float(np.polyfit(np.log(Ns), np.log(errors), 1)[0])


SLOPE_GRID = (100, 316, 1000, 3162, 10000)


@pytest.fixture
def quintic():
    from inchroot.fixtures import quintic_fixture

    return quintic_fixture()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
