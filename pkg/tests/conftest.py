import pytest

from qtanner.qcode import load_fixture


@pytest.fixture(scope="session")
def code36():
    return load_fixture("d4-36")


@pytest.fixture(scope="session")
def code54():
    return load_fixture("d6-54")
