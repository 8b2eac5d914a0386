import functools

import pytest
from hypothesis import HealthCheck, settings

from normone import load_descriptor

settings.register_profile(
    "normone", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture])
settings.load_profile("normone")


@functools.lru_cache(maxsize=None)
def field(name):
    return load_descriptor(name)


@pytest.fixture(scope="session")
def Qi():
    return field("Qi")


@pytest.fixture(scope="session")
def Q3():
    return field("Qsqrt-3")


@pytest.fixture(scope="session")
def Q5():
    return field("Qsqrt-5")


@pytest.fixture(scope="session")
def Qz5():
    return field("Qzeta5")


# one PASS/FAIL line per acceptance criterion, repeated in the terminal summary
_VERDICTS = []


@pytest.fixture
def verdict():
    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(line)
        _VERDICTS.append(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_VERDICTS, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
