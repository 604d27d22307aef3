import os

import pytest
from hypothesis import HealthCheck, settings

from cohoch.simplicial import load_simplicial_set

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DATA = os.path.join(os.path.dirname(__file__), os.pardir, "src", "cohoch", "data")


def data_path(name):
    return os.path.abspath(os.path.join(DATA, name + ".json"))


@pytest.fixture
def fixture_set():
    def load(name, **kw):
        return load_simplicial_set(data_path(name), **kw)
    return load
