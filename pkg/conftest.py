import pytest
from hypothesis import HealthCheck, settings

from src.hassett import pair_witness, triple_witness
from src.lattice_core import build_ambient

settings.register_profile(
    "exact",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much, HealthCheck.function_scoped_fixture],
)
settings.load_profile("exact")


@pytest.fixture(scope="session")
def ambient():
    return build_ambient()


@pytest.fixture(scope="session")
def case1_witness():
    """Pair witness for (12, 18): Gram diag(3, 4, 6)."""
    return pair_witness(12, 18)


@pytest.fixture(scope="session")
def case3_triple():
    return triple_witness(14, 26)


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    for var in ("HASSETT_CONFIG", "HASSETT_JOBS", "HASSETT_LOG_LEVEL", "HASSETT_FORMAT"):
        monkeypatch.delenv(var, raising=False)
