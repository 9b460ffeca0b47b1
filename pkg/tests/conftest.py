from __future__ import annotations

import time
from contextlib import contextmanager

import pytest

CRITERIA = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[CRITERIA] = []


class Outcome:
    def __init__(self) -> None:
        self.detail = ""


@pytest.fixture
def criterion(request):
    """Context manager that times one acceptance criterion and records a PASS/FAIL line."""
    sink = request.config.stash[CRITERIA]

    @contextmanager
    def run(label: str, budget_s: float):
        out = Outcome()
        start = time.perf_counter()
        error = None
        try:
            yield out
        except BaseException as exc:  # recorded, then re-raised
            error = exc
        elapsed = time.perf_counter() - start
        over = elapsed > budget_s
        status = "PASS" if error is None and not over else "FAIL"
        why = out.detail
        if error is not None:
            why = f"{why}; {type(error).__name__}: {error}".strip("; ")
        elif over:
            why = f"{why}; over the time budget".strip("; ")
        line = f"criterion {label}: {status}  {why}  [{elapsed:.1f}s of {budget_s:.0f}s]"
        sink.append(line)
        print(line)
        if error is not None:
            raise error
        assert not over, line

    return run


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(CRITERIA, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
