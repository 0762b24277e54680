import pytest
from hypothesis import settings

from selberg1.asymptotics import stirling_constants
from selberg1.characters import build_L_element, enumerate_characters

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def zeta():
    return build_L_element(enumerate_characters(1)[0])


@pytest.fixture(scope="session")
def chi4():
    return enumerate_characters(4)[1]


@pytest.fixture(scope="session")
def L4(chi4):
    return build_L_element(chi4)


@pytest.fixture(scope="session")
def chi3():
    return enumerate_characters(3)[1]


@pytest.fixture(scope="session")
def sc_zeta(zeta):
    return stirling_constants(zeta.fe)


@pytest.fixture(scope="session")
def sc_L4(L4):
    return stirling_constants(L4.fe)
