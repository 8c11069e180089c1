import pytest
from hypothesis import HealthCheck, settings

from hopfcyc.catalog import schwarzian

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def sw():
    return schwarzian()
