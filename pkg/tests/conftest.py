import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from isingnet.graphs import InteractionNetwork, enumerate_networks, network_codes  # noqa: E402


def make_net(n, edges):
    return InteractionNetwork.from_edges(n, edges)


@pytest.fixture
def ferro_triangle():
    return make_net(3, [(0, 1, 1), (0, 2, 1), (1, 2, 1)])


@pytest.fixture
def afm_triangle():
    return make_net(3, [(0, 1, -1), (0, 2, -1), (1, 2, -1)])


@pytest.fixture
def ferro_path():
    # spin 1 is the centre
    return make_net(3, [(0, 1, 1), (1, 2, 1)])


@pytest.fixture
def ferro_square():
    return make_net(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 1)])


@pytest.fixture(scope="session")
def small_networks():
    """Every network with 3 to 5 spins."""
    return [net for n in (3, 4, 5) for net in enumerate_networks(n)]


@pytest.fixture
def rng():
    return np.random.default_rng(20250516)


def random_networks(rng, n, count):
    total = len(network_codes(n))
    picks = rng.choice(total, size=min(count, total), replace=False)
    return enumerate_networks(n, sorted(int(k) + 1 for k in picks))


def permuted(net, perm):
    perm = np.asarray(perm)
    j = np.zeros_like(net.couplings)
    j[np.ix_(perm, perm)] = net.couplings
    return j


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")
