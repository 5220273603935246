import pytest

from pnchanest import dtmb_guard_interval, generate_m_sequence


@pytest.fixture(scope="session")
def seq7():
    return generate_m_sequence(3)


@pytest.fixture(scope="session")
def seq255():
    return generate_m_sequence(8)


@pytest.fixture(scope="session")
def seq511():
    return generate_m_sequence(9)


@pytest.fixture(scope="session")
def guard420():
    return dtmb_guard_interval("dtmb420")


@pytest.fixture(scope="session")
def guard945():
    return dtmb_guard_interval("dtmb945")
