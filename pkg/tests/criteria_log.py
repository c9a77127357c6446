"""Collects one line per acceptance criterion; printed by the terminal-summary hook in conftest."""

import time
from contextlib import contextmanager

RESULTS: list[tuple[int, str, str, float, float]] = []


@contextmanager
def criterion(number: int, title: str, limit: float, expect_fail: bool = False):
    start = time.perf_counter()
    status = "FAIL"
    try:
        yield
        status = "PASS"
    finally:
        elapsed = time.perf_counter() - start
        if status == "PASS" and elapsed > limit:
            status = "FAIL"
        if expect_fail and status == "FAIL":
            status = "FAIL (expected, see ledger)"
        RESULTS.append((number, title, status, elapsed, limit))
        print(f"criterion {number:2d} {title}: {status} [{elapsed:.2f}s / {limit:.0f}s]")
    assert elapsed <= limit, f"criterion {number} took {elapsed:.1f}s, limit {limit}s"
