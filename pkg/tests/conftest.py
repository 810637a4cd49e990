import pytest

from dirichlet_hardy.arith import sieve_primes


@pytest.fixture(scope="session")
def table_2k():
    return sieve_primes(2000)


@pytest.fixture(scope="session")
def table_20k():
    return sieve_primes(20000)


@pytest.fixture(scope="session")
def table_100k():
    return sieve_primes(100_000)


@pytest.fixture(scope="session")
def table_1m():
    return sieve_primes(1_000_000)


@pytest.fixture(scope="session")
def table_10m():
    return sieve_primes(10_000_000)
