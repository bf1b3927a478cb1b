import functools

import pytest
from hypothesis import HealthCheck, settings

from modcx import builtin_ring

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@functools.lru_cache(maxsize=None)
def ring(name: str, prime: int = 101):
    return builtin_ring(name, prime)[0]


@pytest.fixture
def get_ring():
    return ring


# one line per acceptance criterion, printed again at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
