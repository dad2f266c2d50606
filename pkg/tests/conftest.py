import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from helpers import ACCEPTANCE_RESULTS  # noqa: E402
from rpboost.data import Dataset  # noqa: E402


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[num]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {detail}")


@pytest.fixture
def tiny_separable():
    x = np.array([[1.0, 0.2], [2.0, -0.1], [3.0, 0.3], [4.0, 0.0]])
    return Dataset(x, np.array([-1.0, -1.0, 1.0, 1.0]))

