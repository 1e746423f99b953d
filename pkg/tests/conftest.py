import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from egotemporal.txmodel import TransactionRecord, TransactionSet  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


def tx(sender, receiver, amount=1, timestamp=0):
    """Record with an integer Ether ``amount`` (or Wei if given as ``("wei", n)``)."""
    wei = amount[1] if isinstance(amount, tuple) else int(amount * 10**18)
    return TransactionRecord(sender, receiver, wei, timestamp)


@pytest.fixture
def make_set():
    def _make(*edges):
        return TransactionSet(tx(*e) for e in edges)
    return _make


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
