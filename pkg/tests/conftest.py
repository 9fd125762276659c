import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("sbdconv", deadline=None, max_examples=40, derandomize=True)
settings.load_profile("sbdconv")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE = {}


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per acceptance criterion."""

    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE[(number, detail)] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[n])
