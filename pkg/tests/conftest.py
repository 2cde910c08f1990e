from math import isqrt

import pytest


def brute_min_squares(n: int) -> int:
    """Fewest positive squares summing to n, by direct enumeration."""
    if n == 0:
        return 0
    squares = [i * i for i in range(1, isqrt(n) + 1)]
    sset = set(squares)
    if n in sset:
        return 1
    if any(n - s in sset for s in squares):
        return 2
    if any(n - s - t in sset for s in squares for t in squares if s + t < n):
        return 3
    return 4


def legendre_set(limit: int) -> set[int]:
    """All 4^k (8m + 7) up to limit, generated forwards."""
    out = set()
    p = 1
    while 7 * p <= limit:
        out.update(range(7 * p, limit + 1, 8 * p))
        p *= 4
    return out


def dnn_matrices(max_c: int):
    for c in range(max_c + 1):
        for a in range(c + 1):
            for b in range(isqrt(a * c) + 1):
                yield a, b, c


@pytest.fixture(scope="session")
def brute_table():
    return [brute_min_squares(n) for n in range(10**4 + 1)]


_CRITERIA: list[tuple[str, str, str]] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
        _CRITERIA.append((marker.args[0], "PASS" if report.passed else "FAIL", doc))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label, status, doc in sorted(_CRITERIA, key=lambda r: [int(p) if p.isdigit() else p for p in r[0].split(".")]):
        terminalreporter.write_line(f"{status}  {label:>4}  {doc}")
