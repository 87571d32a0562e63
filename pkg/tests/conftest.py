import pytest
from hypothesis import HealthCheck, settings

from cfr_alt.builders import counterexample_game, kuhn_poker

settings.register_profile(
    "default", max_examples=50, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def kuhn():
    return kuhn_poker()


@pytest.fixture(scope="session")
def obs1():
    return counterexample_game()


# acceptance criteria append (label, passed, detail) here; printed at the end
ACCEPTANCE: list[tuple[str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {label}: {detail}")
