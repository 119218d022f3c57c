import pytest

from projline.abstract_line import coordinate_model
from projline.scalars import FieldContext
from projline.utils import CONFIG_ENV


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: exhaustive sweeps over the larger fields")


@pytest.fixture(autouse=True)
def default_config(monkeypatch):
    monkeypatch.delenv(CONFIG_ENV, raising=False)


@pytest.fixture(scope="session")
def gf3():
    return FieldContext.prime(3)


@pytest.fixture(scope="session")
def gf5():
    return FieldContext.prime(5)


@pytest.fixture(scope="session")
def gf7():
    return FieldContext.prime(7)


@pytest.fixture(scope="session")
def rationals():
    return FieldContext.rational()


@pytest.fixture(scope="session")
def model3():
    return coordinate_model(3)


@pytest.fixture(scope="session")
def model5():
    return coordinate_model(5)


@pytest.fixture(scope="session")
def model7():
    return coordinate_model(7)
