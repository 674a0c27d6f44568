import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "ci", deadline=None, derandomize=True, max_examples=30,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def fam():
    from azarin.measures import MetricFamily
    return MetricFamily()


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
