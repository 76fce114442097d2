import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from cfda.scene import Scenario

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def desk():
    return Scenario.desk()


@pytest.fixture(scope="session")
def fig():
    return Scenario.table1()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_pd(rng, n, cond=10.0):
    """Random Hermitian PD matrix with eigenvalues spread over ``[1, cond]``."""
    q, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    ev = np.geomspace(1.0, cond, n)
    return (q * ev) @ q.conj().T


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
