import pytest

from k2rank import build_sieve


@pytest.fixture(scope="session")
def sieve_small():
    return build_sieve(200_000)


@pytest.fixture(scope="session")
def sieve_big():
    return build_sieve(1_000_000)
