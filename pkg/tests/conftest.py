import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL/SKIP line per acceptance criterion.

    Lines are printed as the test runs and repeated in the terminal summary.
    """
    lines = request.config.stash.setdefault(_ACCEPTANCE_KEY, [])

    def record(number, status, message):
        line = f"criterion {number}: {status} - {message}"
        lines.append(line)
        print(line)
        return status

    return record


_ACCEPTANCE_KEY = pytest.StashKey[list]()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
