import pytest

from feforge.eqdsl import DomainClass, DomainSpec

# outcome of each acceptance criterion, filled by tests/test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, title = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}")


@pytest.fixture
def additive_group():
    return DomainSpec(DomainClass.Group, "additive")


@pytest.fixture
def multiplicative_group():
    return DomainSpec(DomainClass.Group, "multiplicative")
