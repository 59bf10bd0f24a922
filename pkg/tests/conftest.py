import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from spinrank import build_network  # noqa: E402

DATA = Path(__file__).parent / "data"

KITE_TIES = {
    "Andre": ["Beverly", "Carol", "Diane", "Fernando"],
    "Beverly": ["Diane", "Ed", "Garth"],
    "Carol": ["Diane", "Fernando"],
    "Diane": ["Ed", "Fernando", "Garth"],
    "Ed": ["Garth"],
    "Fernando": ["Garth", "Heather"],
    "Garth": ["Heather"],
    "Heather": ["Ike"],
    "Ike": ["Jane"],
}


def kite_network():
    rows = []
    for a, bs in KITE_TIES.items():
        for b in bs:
            rows += [(a, b, 1.0), (b, a, 1.0)]
    return build_network(rows)


def chain_network():
    # A -> B -> C with C -> B
    return build_network([("A", "B", 1.0), ("B", "C", 1.0), ("C", "B", 1.0)])


def star_network(k=4):
    """Leaves call the center; the inactive center gets 1/k back to each."""
    from spinrank.commitment import ActivityMatrix, commitment_network

    acts = ActivityMatrix(k + 1, {(i, 0): 1.0 for i in range(1, k + 1)},
                          labels=["c"] + [f"l{i}" for i in range(1, k + 1)])
    return commitment_network(acts)


@pytest.fixture
def kite():
    return kite_network()


@pytest.fixture
def chain():
    return chain_network()


@pytest.fixture
def star():
    return star_network()


_ACCEPTANCE_LINES = []


def record_acceptance(line):
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
