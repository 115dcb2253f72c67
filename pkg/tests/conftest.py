import time

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


class _Criterion:
    """Times one acceptance criterion and records a pass/fail line."""

    def __init__(self, log, number, title, limit):
        self.log, self.number, self.title, self.limit = log, number, title, limit
        self.detail = ""

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        ok = exc_type is None and elapsed < self.limit
        why = self.detail
        if exc_type is not None:
            why = f"{why} [{exc_type.__name__}: {str(exc).splitlines()[0] if str(exc) else ''}]"
        line = (f"{'PASS' if ok else 'FAIL'} criterion {self.number}: {self.title}: {why.strip()} "
                f"({elapsed:.2f} s, limit {self.limit:g} s)")
        self.log.append((self.number, line))
        print("\n" + line)
        if exc_type is None and not ok:
            raise AssertionError(f"criterion {self.number} exceeded its runtime limit: {elapsed:.2f} s")
        return False


_ACCEPTANCE_LOG: list = []


@pytest.fixture
def criterion():
    def make(number, title, limit):
        return _Criterion(_ACCEPTANCE_LOG, number, title, limit)
    return make


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LOG:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_ACCEPTANCE_LOG):
        terminalreporter.write_line(line)
