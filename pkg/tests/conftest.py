import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record_criterion():
    def record(res):
        line = f"{res.line()}  ({res.seconds:.1f}s)"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return res
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s[7:9])):
            terminalreporter.write_line(line)
        passed = sum(line.startswith("[PASS]") for line in ACCEPTANCE_LINES)
        terminalreporter.write_line(f"{passed}/{len(ACCEPTANCE_LINES)} criteria passed")
