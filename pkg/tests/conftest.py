import time

import pytest

# criterion number -> (passed, seconds, detail)
ACCEPTANCE: dict = {}


class Criterion:
    def __init__(self, number: int, title: str, limit: float):
        self.number = number
        self.title = title
        self.limit = limit
        self.detail = ""

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        dt = time.perf_counter() - self.t0
        passed = exc_type is None and dt <= self.limit
        if exc_type is None and dt > self.limit:
            self.detail += f" (over the {self.limit:g} s limit)"
        elif exc_type is not None:
            self.detail += f" {exc_type.__name__}: {exc}"
        ACCEPTANCE[self.number] = (passed, dt, self.title, self.detail.strip())
        line = f"criterion {self.number:2d} {'PASS' if passed else 'FAIL'} {dt:7.2f}s  {self.title}"
        print(line)
        if exc_type is None and not passed:
            raise AssertionError(f"criterion {self.number} exceeded its time limit: {dt:.1f} s")
        return False


@pytest.fixture
def criterion():
    return Criterion


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        passed, dt, title, detail = ACCEPTANCE[n]
        line = f"criterion {n:2d}: {'PASS' if passed else 'FAIL'}  {dt:7.2f}s  {title}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
