import numpy as np
import pytest

from graphbatch import _backend, aflow_like, gen_dataset, make_graph, qm9_like


@pytest.fixture(params=sorted(_backend.BACKENDS))
def backend(request):
    """Run the test once per available kernel backend."""
    previous = _backend.set_backend(request.param)
    yield request.param
    _backend.set_backend(previous)


@pytest.fixture(scope="session")
def qm9_dataset():
    return gen_dataset(qm9_like(size=10_000, seed=1))


@pytest.fixture(scope="session")
def aflow_dataset():
    return gen_dataset(aflow_like(size=10_000, seed=1))


def random_graph(rng, max_nodes=12, max_edges=30, features=None):
    """Random valid graph; ``features`` forces feature presence (None = random)."""
    n = int(rng.integers(0, max_nodes + 1))
    e = int(rng.integers(0, max_edges + 1)) if n else 0
    senders = rng.integers(0, max(n, 1), e)
    receivers = rng.integers(0, max(n, 1), e)
    with_features = bool(rng.integers(0, 2)) if features is None else features
    nf = rng.normal(size=(n, 2)) if with_features else None
    ef = rng.normal(size=(e, 3)) if with_features else None
    return make_graph(n, senders, receivers, nf, ef)


def random_graph_list(rng, max_len=8):
    features = bool(rng.integers(0, 2))
    return [random_graph(rng, features=features) for _ in range(int(rng.integers(1, max_len + 1)))]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_RESULTS = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py::" in report.nodeid:
        name = report.nodeid.split("::", 1)[1]
        ACCEPTANCE_RESULTS.append(("PASS" if report.passed else "FAIL", name, report.duration))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for status, name, duration in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"[{status}] {name} ({duration:.2f}s)")
