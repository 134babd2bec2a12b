import pytest

from narep.reduction import full_reduction
from narep.search import SearchConfig, search_all

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def reduction_table():
    """All four reduction steps for g = 2..12 (about two minutes on one core)."""
    return full_reduction()


@pytest.fixture(scope="session")
def full_search():
    return search_all(SearchConfig(k_max=2000))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
