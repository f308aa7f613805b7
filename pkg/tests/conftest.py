import pytest

from pntzeta.arith import sieve_lambda
from pntzeta.zeros import embedded_zeros


@pytest.fixture(scope="session")
def zero_table():
    return embedded_zeros()


@pytest.fixture(scope="session")
def lambda_table():
    return sieve_lambda(10**6)


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request, capsys):
    """Record one PASS/FAIL line per acceptance criterion and assert on it."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def record(number, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
        lines.append(line)
        with capsys.disabled():
            print(f"\n{line}")
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
